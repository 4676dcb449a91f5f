//! The function `g(x) = ln Gamma(x + 1) / x` (with `g(0) = -gamma`) and the
//! auxiliary sums used to express its derivatives.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::jets::Jet;
use crate::quad;
use crate::specfun::{factorial, ln_gamma_1p, psi_k, zeta_any, EULER_GAMMA};

/// Highest derivative order served by the closed forms.
pub const MAX_FAMILY_ORDER: usize = 20;

/// Below this `|x|` the derivatives of `g` come from its zeta power series.
pub const SERIES_RADIUS: f64 = 0.25;

const MAX_QUADRATURE_ORDER: usize = 12;
const QUADRATURE_TOL: f64 = 1e-10;

/// Extra Taylor orders carried by the near-zero jet quotient.
const BACKWARD_GUARD: usize = 48;

fn check_arg(func: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x <= -1.0 {
        return Err(Error::domain(func, x, "requires x > -1"));
    }
    Ok(())
}

fn check_order(what: &'static str, n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        return Err(Error::range(what, n as i64, min as i64, max as i64));
    }
    Ok(())
}

fn alt(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `h_n(x) = sum_{k=0}^n (-1)^(n-k) n!/k! x^k psi^(k-1)(x+1)`, with
/// `psi^(-1) = ln Gamma`. It satisfies `g^(n)(x) = h_n(x) / x^(n+1)`.
pub fn h_n(n: usize, x: f64) -> Result<f64> {
    check_order("h_n order", n, 0, MAX_FAMILY_ORDER)?;
    check_arg("h_n", x)?;
    let nf = factorial(n);
    let mut terms = Vec::with_capacity(n + 1);
    let mut xk = 1.0;
    for k in 0..=n {
        let psi = if k == 0 {
            ln_gamma_1p(x)?
        } else {
            psi_k(k as i32 - 1, 1.0 + x)?
        };
        terms.push(alt(n - k) * nf / factorial(k) * xk * psi);
        xk *= x;
    }
    Ok(terms.iter().rev().sum())
}

/// `mu_{alpha,n}(x) = h_n(x) + (-1)^n (n-1)! alpha x^(n+1) / (x+1)^n`; dividing by
/// `x^(n+1)` gives the n-th derivative of `g(x) - alpha ln(x + 1)`.
pub fn mu_alpha_n(alpha: f64, n: usize, x: f64) -> Result<f64> {
    check_order("mu order", n, 1, MAX_FAMILY_ORDER)?;
    check_arg("mu_alpha_n", x)?;
    let extra = alt(n) * factorial(n - 1) * alpha * x.powi(n as i32 + 1) / (1.0 + x).powi(n as i32);
    Ok(h_n(n, x)? + extra)
}

fn g_series(n: usize, x: f64) -> f64 {
    // g(x) = -gamma + sum_{m>=1} (-1)^(m+1) zeta(m+1)/(m+1) x^m
    let mut terms = Vec::with_capacity(128);
    if n == 0 {
        terms.push(-EULER_GAMMA);
    }
    let start = n.max(1);
    // falling factorial m!/(m-n)!
    let mut falling: f64 = (start - n + 1..=start).map(|i| i as f64).product();
    let mut xp = 1.0;
    for _ in 0..(start - n) {
        xp *= x;
    }
    let mut m = start;
    loop {
        let coef = alt(m + 1) * zeta_any(m as u32 + 1) / (m + 1) as f64;
        let term = coef * falling * xp;
        terms.push(term);
        let head = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
        if m > n + 8 && term.abs() <= 1e-19 * head || m >= 600 {
            break;
        }
        m += 1;
        falling *= m as f64 / (m - n) as f64;
        xp *= x;
    }
    terms.iter().rev().sum()
}

/// n-th derivative of `g(x) = ln Gamma(x+1) / x` on `(-1, inf)`.
///
/// Uses the zeta power series of `g` for `|x| < 0.25` (removable singularity)
/// and `h_n(x) / x^(n+1)` elsewhere.
pub fn g_derivs(n: usize, x: f64) -> Result<f64> {
    check_order("g derivative order", n, 0, MAX_FAMILY_ORDER)?;
    check_arg("g_derivs", x)?;
    if x.abs() < SERIES_RADIUS {
        return Ok(g_series(n, x));
    }
    Ok(h_n(n, x)? / x.powi(n as i32 + 1))
}

/// `g^(n)(x) = integral_0^1 s^n psi^(n)(x s + 1) ds`, by adaptive quadrature.
///
/// The tolerance is `1e-10` absolute, relaxed to `1e-10` relative to the
/// largest integrand value when that exceeds one (near `x = -1`).
pub fn g_quadrature(n: usize, x: f64) -> Result<f64> {
    check_order("quadrature order", n, 0, MAX_QUADRATURE_ORDER)?;
    check_arg("g_quadrature", x)?;
    let psi = |y: f64| psi_k(n as i32, y);
    let peak = psi(1.0)?.abs().max(psi(1.0 + x)?.abs());
    quad::integrate(
        |s| Ok(s.powi(n as i32) * psi(x * s + 1.0)?),
        0.0,
        1.0,
        QUADRATURE_TOL * peak.max(1.0),
    )
}

/// Taylor jet of `g` at `x`, built from the jet of `ln Gamma(1 + u)`.
///
/// Away from zero this is a plain jet quotient by `u`. Near zero the forward
/// quotient amplifies roundoff by `|x|^-k`, so the quotient is formed by
/// backward substitution from a higher-order jet instead; that recurrence
/// contracts by `|x| / (1 + x)` per step.
pub fn g_jet(x: f64, order: usize) -> Result<Jet> {
    check_order("g jet order", order, 0, MAX_FAMILY_ORDER)?;
    check_arg("g_jet", x)?;
    if x.abs() >= SERIES_RADIUS {
        let lg = Jet::lngamma1p(x, order)?;
        return lg.div(&Jet::var(x, order)?);
    }
    let k_max = order + BACKWARD_GUARD;
    let lg = Jet::lngamma1p_unbounded(x, k_max)?;
    let l = lg.coeffs();
    // l_k = x q_k + q_(k-1)
    let mut q = vec![0.0; k_max + 1];
    for k in (1..=k_max).rev() {
        let next = if k < k_max { q[k] } else { 0.0 };
        q[k - 1] = l[k] - x * next;
    }
    q.truncate(order + 1);
    Jet::from_coeffs_unbounded(x, q)
}

/// n-th derivative of `ln(1 + x)`; `n = 0` gives the logarithm itself.
pub(crate) fn dlog1p(n: usize, x: f64) -> f64 {
    if n == 0 {
        x.ln_1p()
    } else {
        alt(n - 1) * factorial(n - 1) / (1.0 + x).powi(n as i32)
    }
}

/// n-th derivative of `ln |x|`.
pub(crate) fn dlog_abs(n: usize, x: f64) -> f64 {
    if n == 0 {
        x.abs().ln()
    } else {
        alt(n - 1) * factorial(n - 1) / x.powi(n as i32)
    }
}

/// `[ln Gamma(1+x) - x psi(1+x)] / x^2`, which tends to `-pi^2/12` as `x -> 0`.
pub fn gamma_limit_probe(x: f64) -> Result<f64> {
    Ok(-g_derivs(1, x)?)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProbeRow {
    pub x: f64,
    pub value: f64,
    /// `value + pi^2/12`.
    pub error: f64,
    /// Richardson estimate from this row and the previous one (step ratio 10).
    pub extrapolated: Option<f64>,
}

/// Probe values at `x = 10^-k` for `k` in `k_from..=k_to`.
pub fn limit_probe_table(k_from: i32, k_to: i32) -> Result<Vec<ProbeRow>> {
    if k_from > k_to {
        return Err(Error::InvalidParameter(format!("empty probe range {k_from}..={k_to}")));
    }
    let limit = -PI * PI / 12.0;
    let mut rows: Vec<ProbeRow> = Vec::new();
    for k in k_from..=k_to {
        let x = 10f64.powi(-k);
        let value = gamma_limit_probe(x)?;
        // The probe approaches its limit linearly in x.
        let extrapolated = rows.last().map(|prev| (10.0 * value - prev.value) / 9.0);
        rows.push(ProbeRow {
            x,
            value,
            error: value - limit,
            extrapolated,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{digamma, polygamma};
    use approx::assert_relative_eq;

    #[test]
    fn h_vanishes_at_zero() {
        for n in 1..=12 {
            assert!(h_n(n, 0.0).unwrap().abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn h_1_at_one() {
        assert_relative_eq!(h_n(1, 1.0).unwrap(), 1.0 - EULER_GAMMA, max_relative = 1e-14);
    }

    #[test]
    fn even_h_is_negative_on_positive_axis() {
        for &x in &[0.1, 0.5, 1.0, 3.0, 10.0, 40.0] {
            assert!(h_n(2, x).unwrap() < 0.0, "x={x}");
            assert!(h_n(4, x).unwrap() < 0.0, "x={x}");
        }
    }

    #[test]
    fn g_values_at_zero_and_one() {
        assert_relative_eq!(g_derivs(0, 0.0).unwrap(), -EULER_GAMMA, max_relative = 1e-15);
        assert_relative_eq!(g_derivs(1, 0.0).unwrap(), PI * PI / 12.0, max_relative = 1e-14);
        assert_relative_eq!(g_derivs(1, 1.0).unwrap(), 1.0 - EULER_GAMMA, max_relative = 1e-14);
        for n in 1..=8 {
            let want = polygamma(n as u32, 1.0).unwrap() / (n + 1) as f64;
            assert_relative_eq!(g_derivs(n, 0.0).unwrap(), want, max_relative = 1e-13);
        }
        assert!(g_derivs(1, -1.0).is_err());
        assert!(g_derivs(21, 1.0).is_err());
    }

    #[test]
    fn branches_agree_at_switch_radius() {
        for n in 0..=8 {
            for &x in &[-SERIES_RADIUS, SERIES_RADIUS] {
                let inside = g_series(n, x);
                let outside = h_n(n, x).unwrap() / x.powi(n as i32 + 1);
                // the closed form loses about n! eps / |x|^(n+1) to cancellation here
                assert_relative_eq!(inside, outside, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn quadrature_route() {
        assert!(g_quadrature(0, 1.0).unwrap().abs() < 1e-10);
        for &x in &[-0.9, -0.3, 0.0, 0.1, 0.7, 4.0, 25.0] {
            assert!(g_quadrature(2, x).unwrap() < 0.0, "x={x}");
            for n in 0..=6 {
                let q = g_quadrature(n, x).unwrap();
                let c = g_derivs(n, x).unwrap();
                assert!((q - c).abs() <= 1e-8 * c.abs().max(1.0), "n={n} x={x} {q} vs {c}");
            }
        }
        assert!(g_quadrature(13, 1.0).is_err());
    }

    #[test]
    fn mu_reduces_and_vanishes() {
        for n in 1..=6 {
            assert!(mu_alpha_n(1.7, n, 0.0).unwrap().abs() < 1e-14);
            assert_eq!(mu_alpha_n(0.0, n, 2.5).unwrap(), h_n(n, 2.5).unwrap());
        }
        for &x in &[0.05, 0.5, 2.0, 30.0] {
            assert!(mu_alpha_n(1.0, 2, x).unwrap() > 0.0, "x={x}");
        }
    }

    #[test]
    fn jet_route_matches_closed_form() {
        for &x in &[-0.95, -0.3, -0.2, -0.01, 0.0, 1e-6, 0.1, 0.24, 0.26, 1.5, 20.0] {
            let j = g_jet(x, 8).unwrap();
            for n in 0..=8 {
                let want = g_derivs(n, x).unwrap();
                assert_relative_eq!(j.derivative(n), want, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn probe_table_approaches_limit() {
        let rows = limit_probe_table(2, 5).unwrap();
        let limit = -PI * PI / 12.0;
        let z3 = 1.202_056_903_159_594_2;
        for r in &rows {
            // leading behaviour: probe(x) ~ limit + (2/3) zeta(3) x
            assert_relative_eq!(r.error, 2.0 / 3.0 * z3 * r.x, max_relative = 0.02);
        }
        let last = rows.last().unwrap();
        assert!((last.extrapolated.unwrap() - limit).abs() < 1e-9);
        // independent route
        let x = 1e-3;
        let direct = (crate::specfun::ln_gamma_1p(x).unwrap() - x * digamma(1.0 + x).unwrap()) / (x * x);
        assert_relative_eq!(rows[1].value, direct, max_relative = 1e-9);
    }
}
