//! Double-precision log-gamma, digamma, polygamma and integer zeta values.
//!
//! Every routine shifts its argument upward with the functional recurrence
//! until the Stirling-type asymptotic expansion is accurate, then sums the
//! expansion with the Bernoulli numbers `B_2 ..= B_20`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Euler-Mascheroni constant, `-psi(1)`.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ln(2 pi) / 2`.
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Even-index Bernoulli numbers `B_2, B_4, ..., B_20`.
pub const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Largest polygamma order accepted by the public [`polygamma`].
pub const MAX_POLYGAMMA_ORDER: u32 = 20;

/// Largest order used internally (high-order Taylor coefficients of `ln Gamma`).
pub(crate) const MAX_INTERNAL_POLYGAMMA: u32 = 80;

/// Recurrence-to-asymptotic crossover for `ln Gamma` and `psi`.
const SHIFT: f64 = 12.0;

const MAX_ZETA_ARG: u32 = 64;

fn factorials() -> &'static [f64; 171] {
    static TABLE: OnceLock<[f64; 171]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [1.0; 171];
        for k in 1..171 {
            t[k] = t[k - 1] * k as f64;
        }
        t
    })
}

/// `k!` as a float; exact up to `22!`, correctly rounded products beyond.
pub fn factorial(k: usize) -> f64 {
    factorials().get(k).copied().unwrap_or(f64::INFINITY)
}

fn require_positive(func: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::domain(func, x, "argument must be finite"));
    }
    if x <= 0.0 {
        return Err(Error::domain(func, x, "argument must be positive"));
    }
    Ok(())
}

fn stirling_ln_gamma(x: f64, terms: usize) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    // Smallest terms first.
    let mut powers = [0.0; 10];
    let mut p = inv;
    for slot in powers.iter_mut().take(terms) {
        *slot = p;
        p *= inv2;
    }
    for k in (0..terms).rev() {
        let two_k = 2.0 * (k as f64 + 1.0);
        corr += BERNOULLI_EVEN[k] / (two_k * (two_k - 1.0)) * powers[k];
    }
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + corr
}

fn asymptotic_digamma(x: f64, terms: usize) -> f64 {
    let inv2 = 1.0 / (x * x);
    let mut corr = 0.0;
    let mut powers = [0.0; 10];
    let mut p = inv2;
    for slot in powers.iter_mut().take(terms) {
        *slot = p;
        p *= inv2;
    }
    for k in (0..terms).rev() {
        let two_k = 2.0 * (k as f64 + 1.0);
        corr += BERNOULLI_EVEN[k] / two_k * powers[k];
    }
    x.ln() - 0.5 / x - corr
}

/// Power series `ln Gamma(1 + z) = -gamma z + sum_{k>=2} (-1)^k zeta(k) z^k / k`,
/// used for `|z| <= 1/2` where it is exact at `z = 0`.
fn ln_gamma_1p_series(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut terms = [0.0; 80];
    let mut zk = z;
    for (k, slot) in terms.iter_mut().enumerate().skip(2) {
        zk *= z;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        *slot = sign * zeta_any(k as u32) * zk / k as f64;
        if zk.abs() < 1e-20 * z.abs() {
            break;
        }
    }
    for t in terms.iter().rev() {
        sum += t;
    }
    sum - EULER_GAMMA * z
}

/// Natural logarithm of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    require_positive("ln_gamma", x)?;
    if (0.5..1.5).contains(&x) {
        return Ok(ln_gamma_1p_series(x - 1.0));
    }
    if (1.5..2.5).contains(&x) {
        let z = x - 2.0;
        return Ok(ln_gamma_1p_series(z) + z.ln_1p());
    }
    if x < 0.5 {
        return Ok(ln_gamma_1p_series(x) - x.ln());
    }
    if x >= SHIFT {
        return Ok(stirling_ln_gamma(x, BERNOULLI_EVEN.len()));
    }
    // Shift down into [1.5, 2.5); shifting up to the asymptotic range would
    // subtract two logarithms of similar size.
    let mut prod = 1.0;
    let mut y = x;
    while y >= 2.5 {
        y -= 1.0;
        prod *= y;
    }
    let z = y - 2.0;
    Ok(ln_gamma_1p_series(z) + z.ln_1p() + prod.ln())
}

/// `ln Gamma(1 + x)` for `x > -1`, accurate in the relative sense near `x = 0`.
pub fn ln_gamma_1p(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= -1.0 {
        return Err(Error::domain("ln_gamma_1p", x, "requires x > -1"));
    }
    if x.abs() <= 0.5 {
        Ok(ln_gamma_1p_series(x))
    } else {
        ln_gamma(1.0 + x)
    }
}

/// Digamma function `psi(x) = Gamma'(x) / Gamma(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    require_positive("digamma", x)?;
    let mut shift = 0.0;
    let mut y = x;
    let mut recips = Vec::new();
    while y < SHIFT {
        recips.push(1.0 / y);
        y += 1.0;
    }
    for r in recips.iter().rev() {
        shift += r;
    }
    Ok(asymptotic_digamma(y, BERNOULLI_EVEN.len()) - shift)
}

/// Polygamma function `psi^(n)(x)` for `1 <= n <= 20`, `x > 0`.
pub fn polygamma(n: u32, x: f64) -> Result<f64> {
    if !(1..=MAX_POLYGAMMA_ORDER).contains(&n) {
        return Err(Error::range("polygamma order", n as i64, 1, MAX_POLYGAMMA_ORDER as i64));
    }
    require_positive("polygamma", x)?;
    polygamma_unchecked(n, x)
}

/// Polygamma without the public order cap; `n` up to [`MAX_INTERNAL_POLYGAMMA`].
pub(crate) fn polygamma_unchecked(n: u32, x: f64) -> Result<f64> {
    debug_assert!(n >= 1 && n <= MAX_INTERNAL_POLYGAMMA);
    let nf = n as f64;
    // The asymptotic tail needs y well above n for B_20 truncation to be negligible.
    let target = SHIFT + nf;
    let mut y = x;
    let mut recips = Vec::new();
    while y < target {
        recips.push(y.powi(-(n as i32 + 1)));
        y += 1.0;
    }
    let mut direct = 0.0;
    for r in recips.iter().rev() {
        direct += r;
    }

    // (n-1)!/y^n * [1 + n/(2y) + sum_k B_2k/(2k)! * (n)_(2k) / y^(2k)]
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = [0.0; 10];
    let mut rising = 1.0;
    let mut p = 1.0;
    for (k, slot) in series.iter_mut().enumerate() {
        let j = 2 * k as u32;
        rising *= (nf + j as f64) * (nf + j as f64 + 1.0);
        p *= inv2;
        *slot = BERNOULLI_EVEN[k] / factorial(j as usize + 2) * rising * p;
    }
    let mut bracket = 0.0;
    for s in series.iter().rev() {
        bracket += s;
    }
    bracket += 1.0 + 0.5 * nf * inv;
    let asym = factorial(n as usize - 1) * inv.powi(n as i32) * bracket;

    let magnitude = factorial(n as usize) * direct + asym;
    if !magnitude.is_finite() {
        return Err(Error::domain("polygamma", x, "result overflows f64"));
    }
    Ok(if n % 2 == 1 { magnitude } else { -magnitude })
}

/// `psi^(k)(x)` with the conventions `psi^(-1) = ln Gamma` and `psi^(0) = psi`.
pub(crate) fn psi_k(k: i32, x: f64) -> Result<f64> {
    match k {
        -1 => ln_gamma(x),
        0 => digamma(x),
        k if k > 0 => polygamma_unchecked(k as u32, x),
        _ => Err(Error::range("polygamma order", k as i64, -1, MAX_INTERNAL_POLYGAMMA as i64)),
    }
}

fn zeta_euler_maclaurin(k: u32) -> f64 {
    const N: u32 = 12;
    let s = k as f64;
    let n = N as f64;
    let mut tail = [0.0; 10];
    // B_2j/(2j)! * s (s+1) ... (s+2j-2) * N^(-s-2j+1)
    let mut rising = s;
    let mut npow = n.powi(-(k as i32) - 1);
    for (j, slot) in tail.iter_mut().enumerate() {
        if j > 0 {
            rising *= (s + 2.0 * j as f64 - 1.0) * (s + 2.0 * j as f64);
            npow /= n * n;
        }
        *slot = BERNOULLI_EVEN[j] / factorial(2 * j + 2) * rising * npow;
    }
    let mut sum = 0.0;
    for t in tail.iter().rev() {
        sum += t;
    }
    sum += 0.5 * n.powi(-(k as i32));
    sum += n.powi(1 - k as i32) / (s - 1.0);
    for i in (1..N).rev() {
        sum += (i as f64).powi(-(k as i32));
    }
    sum
}

fn zeta_table() -> &'static [f64; MAX_ZETA_ARG as usize + 1] {
    static TABLE: OnceLock<[f64; MAX_ZETA_ARG as usize + 1]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [f64::INFINITY; MAX_ZETA_ARG as usize + 1];
        for k in 2..=MAX_ZETA_ARG {
            t[k as usize] = zeta_euler_maclaurin(k);
        }
        t
    })
}

/// Riemann zeta at an integer `2 <= k <= 64`.
pub fn zeta_int(k: u32) -> Result<f64> {
    if !(2..=MAX_ZETA_ARG).contains(&k) {
        return Err(Error::range("zeta argument", k as i64, 2, MAX_ZETA_ARG as i64));
    }
    Ok(zeta_table()[k as usize])
}

/// Zeta at any integer `k >= 2`; beyond the table `1 + 2^-k + 3^-k` is exact in f64.
pub(crate) fn zeta_any(k: u32) -> f64 {
    if k <= MAX_ZETA_ARG {
        zeta_table()[k as usize]
    } else {
        let k = k as i32;
        1.0 + 2f64.powi(-k) + 3f64.powi(-k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    LnGamma,
    Digamma,
}

/// Truncated large-`x` expansion of `ln Gamma` or `psi`.
///
/// With `terms = 0` only the leading part is kept:
/// `(x - 1/2) ln x - x + ln(2 pi)/2` or `ln x - 1/(2x)`. Each extra term adds
/// the next Bernoulli correction, so `terms = 1` reproduces the familiar
/// `+ 1/(12x)` and `- 1/(12 x^2)` forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymptoticSeries {
    kind: SeriesKind,
    terms: usize,
}

impl AsymptoticSeries {
    pub const MAX_TERMS: usize = 10;

    pub fn new(kind: SeriesKind, terms: usize) -> Result<Self> {
        if terms > Self::MAX_TERMS {
            return Err(Error::range("asymptotic terms", terms as i64, 0, Self::MAX_TERMS as i64));
        }
        Ok(Self { kind, terms })
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        asym_eval(*self, x)
    }
}

/// Evaluates a truncated asymptotic series at `x >= 1`.
pub fn asym_eval(series: AsymptoticSeries, x: f64) -> Result<f64> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::domain("asym_eval", x, "requires finite x >= 1"));
    }
    Ok(match series.kind {
        SeriesKind::LnGamma => stirling_ln_gamma(x, series.terms),
        SeriesKind::Digamma => asymptotic_digamma(x, series.terms),
    })
}
