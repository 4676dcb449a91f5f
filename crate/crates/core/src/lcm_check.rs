//! Grid scans of the signed log-derivatives `s_n(x) = (-1)^n [ln f]^(n)(x)`.
//!
//! A PASS means no negative value beyond tolerance was found at orders
//! `1..=N` on the grid; it is not a proof. A FAIL carries the grid point
//! where the most negative value occurred.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{LogDerivProvider, OpenInterval};

pub const MIN_GRID: usize = 16;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Default distance kept from an open endpoint that coincides with a domain end.
pub const DEFAULT_MARGIN: f64 = 1e-2;

// Endpoint clustering strength of the tanh map.
const CLUSTER: f64 = 2.0;

// Base finite-difference step as a fraction of the distance to the nearest
// domain end, and its cap for unbounded domains.
const FD_FRACTION: f64 = 1.0 / 16.0;
const FD_MAX_STEP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    #[serde(default)]
    pub lo_margin: f64,
    #[serde(default)]
    pub hi_margin: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        Self::with_margins(lo, hi, 0.0, 0.0)
    }

    pub fn with_margins(lo: f64, hi: f64, lo_margin: f64, hi_margin: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::EmptyDomain(format!("interval ({lo}, {hi}) must have finite ends")));
        }
        if !(lo_margin >= 0.0 && hi_margin >= 0.0) || !(lo_margin.is_finite() && hi_margin.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "margins ({lo_margin}, {hi_margin}) must be finite and >= 0"
            )));
        }
        if !(lo + lo_margin < hi - hi_margin) {
            return Err(Error::EmptyDomain(format!(
                "[{lo} + {lo_margin}, {hi} - {hi_margin}] is empty"
            )));
        }
        Ok(Interval {
            lo,
            hi,
            lo_margin,
            hi_margin,
        })
    }

    /// `(lo, hi)` with `margin` applied at each end that touches `domain`.
    pub fn inside(domain: &OpenInterval, lo: f64, hi: f64, margin: f64) -> Result<Self> {
        let lm = if lo <= domain.lo { margin } else { 0.0 };
        let hm = if hi >= domain.hi { margin } else { 0.0 };
        Self::with_margins(lo, hi, lm, hm)
    }

    /// The closed interval actually scanned.
    pub fn effective(&self) -> (f64, f64) {
        (self.lo + self.lo_margin, self.hi - self.hi_margin)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.effective();
        write!(f, "[{a}, {b}]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Relative slack; an order fails when its minimum is below `-tolerance * max(1, max|s_n|)`.
    pub tolerance: f64,
    pub parallel: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            tolerance: DEFAULT_TOLERANCE,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub order: usize,
    pub min_signed_value: f64,
    pub argmin: f64,
    pub max_abs: f64,
    /// Minimum allowed value, `-tolerance * max(1, max_abs)`.
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub spec: String,
    pub interval: Interval,
    pub orders: usize,
    pub grid_size: usize,
    pub records: Vec<OrderRecord>,
    pub verdict: Verdict,
    pub first_fail_order: Option<usize>,
    pub tolerance: f64,
}

impl CheckReport {
    /// Record of the first failing order, if any.
    pub fn witness(&self) -> Option<&OrderRecord> {
        self.first_fail_order.and_then(|n| self.records.iter().find(|r| r.order == n))
    }
}

/// The `grid + 1` scan points; points of `grid` are a subset of those of `2 * grid`.
pub fn grid_points(iv: &Interval, grid: usize) -> Result<Vec<f64>> {
    if grid < MIN_GRID {
        return Err(Error::range("grid", grid as i64, MIN_GRID as i64, i64::MAX));
    }
    let (a, b) = iv.effective();
    let norm = CLUSTER.tanh();
    let pts = (0..=grid)
        .map(|i| {
            if i == 0 {
                return a;
            }
            if i == grid {
                return b;
            }
            let t = i as f64 / grid as f64;
            let u = 0.5 * (1.0 + (CLUSTER * (2.0 * t - 1.0)).tanh() / norm);
            a + (b - a) * u
        })
        .collect();
    Ok(pts)
}

fn check_inputs(p: &dyn LogDerivProvider, iv: &Interval, max_order: usize) -> Result<()> {
    if max_order < 1 || max_order > p.max_order() {
        return Err(Error::range("order", max_order as i64, 1, p.max_order() as i64));
    }
    let (a, b) = iv.effective();
    let dom = p.domain();
    if !dom.contains_closed(a, b) {
        return Err(Error::RangeViolation(format!(
            "scan interval [{a}, {b}] is not inside the domain {dom} of {}",
            p.describe()
        )));
    }
    Ok(())
}

fn signed_row(p: &dyn LogDerivProvider, x: f64, max_order: usize) -> Result<Vec<f64>> {
    (1..=max_order)
        .map(|n| {
            let v = p.eval(x, n)?;
            if !v.is_finite() {
                return Err(Error::NonFinite { x, order: n });
            }
            Ok(if n % 2 == 0 { v } else { -v })
        })
        .collect()
}

fn signed_table(
    p: &dyn LogDerivProvider,
    pts: &[f64],
    max_order: usize,
    parallel: bool,
) -> Result<Vec<Vec<f64>>> {
    if parallel {
        pts.par_iter().map(|&x| signed_row(p, x, max_order)).collect()
    } else {
        pts.iter().map(|&x| signed_row(p, x, max_order)).collect()
    }
}

/// Scans orders `1..=max_order` and assembles a report.
pub fn check_lcm(
    p: &dyn LogDerivProvider,
    iv: &Interval,
    max_order: usize,
    grid: usize,
    opts: &CheckOptions,
) -> Result<CheckReport> {
    check_inputs(p, iv, max_order)?;
    if !(opts.tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} must be >= 0", opts.tolerance)));
    }
    let pts = grid_points(iv, grid)?;
    let table = signed_table(p, &pts, max_order, opts.parallel)?;

    let mut records = Vec::with_capacity(max_order);
    for n in 1..=max_order {
        let mut min = f64::INFINITY;
        let mut argmin = pts[0];
        let mut max_abs: f64 = 0.0;
        for (row, &x) in table.iter().zip(&pts) {
            let v = row[n - 1];
            if v < min {
                min = v;
                argmin = x;
            }
            max_abs = max_abs.max(v.abs());
        }
        let threshold = -opts.tolerance * max_abs.max(1.0);
        records.push(OrderRecord {
            order: n,
            min_signed_value: min,
            argmin,
            max_abs,
            threshold,
            pass: min >= threshold,
        });
    }
    let first_fail_order = records.iter().find(|r| !r.pass).map(|r| r.order);
    Ok(CheckReport {
        spec: p.describe(),
        interval: *iv,
        orders: max_order,
        grid_size: grid,
        verdict: if first_fail_order.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        first_fail_order,
        records,
        tolerance: opts.tolerance,
    })
}

/// `(min, argmin)` of `s_order` over the grid; ties keep the leftmost point.
pub fn min_signed_derivative(
    p: &dyn LogDerivProvider,
    order: usize,
    iv: &Interval,
    grid: usize,
) -> Result<(f64, f64)> {
    check_inputs(p, iv, order)?;
    let pts = grid_points(iv, grid)?;
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    let vals: Vec<f64> = pts
        .par_iter()
        .map(|&x| {
            let v = p.eval(x, order)?;
            if v.is_finite() {
                Ok(sign * v)
            } else {
                Err(Error::NonFinite { x, order })
            }
        })
        .collect::<Result<_>>()?;
    let mut best = (f64::INFINITY, pts[0]);
    for (v, x) in vals.into_iter().zip(pts) {
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

// Central-difference weights for orders 1..=4 at offsets -2..=2 (times h^-k).
const CENTRAL: [[f64; 5]; 4] = [
    [0.0, -0.5, 0.0, 0.5, 0.0],
    [0.0, 1.0, -2.0, 1.0, 0.0],
    [-0.5, 1.0, 0.0, -1.0, 0.5],
    [1.0, -4.0, 6.0, -4.0, 1.0],
];

/// Largest step of the [`fd_oracle`] ladder at `x`.
///
/// Proportional to the distance from `x` to the nearest end of `domain`, so
/// that the relative error stays level as `x` approaches a singular endpoint.
pub fn fd_base_step(domain: &OpenInterval, x: f64) -> f64 {
    let d = (x - domain.lo).min(domain.hi - x);
    (FD_FRACTION * d).min(FD_MAX_STEP)
}

/// Richardson-extrapolated central difference of `ln f` of order `1..=4`,
/// over three halving steps.
pub fn fd_oracle(p: &dyn LogDerivProvider, order: usize, x: f64) -> Result<f64> {
    if !(1..=4).contains(&order) {
        return Err(Error::range("finite-difference order", order as i64, 1, 4));
    }
    let dom = p.domain();
    if !x.is_finite() || !dom.contains(x) {
        return Err(Error::RangeViolation(format!("x = {x} outside {dom}")));
    }
    let h0 = fd_base_step(&dom, x);
    let reach = if order <= 2 { h0 } else { 2.0 * h0 };
    if !dom.contains_closed(x - reach, x + reach) || h0 <= 0.0 {
        return Err(Error::RangeViolation(format!(
            "step ladder around x = {x} (reach {reach}) leaves {dom}"
        )));
    }
    let w = &CENTRAL[order - 1];
    let mut d = [0.0; 3];
    for (level, slot) in d.iter_mut().enumerate() {
        let h = h0 / f64::powi(2.0, level as i32);
        let mut acc = 0.0;
        for (j, &c) in w.iter().enumerate() {
            if c != 0.0 {
                acc += c * p.eval(x + (j as f64 - 2.0) * h, 0)?;
            }
        }
        *slot = acc / h.powi(order as i32);
    }
    let r1 = [(4.0 * d[1] - d[0]) / 3.0, (4.0 * d[2] - d[1]) / 3.0];
    Ok((16.0 * r1[1] - r1[0]) / 15.0)
}
