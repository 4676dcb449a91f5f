//! Ratios of factorial roots `(k!)^(1/k)`, evaluated in log space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::ln_gamma_1p;

/// Upper bound on `k + m + n`.
pub const MAX_FACTORIAL_INDEX: u64 = 10_000;

/// `ln (j!)^(1/j)`.
fn log_root(j: u64) -> Result<f64> {
    Ok(ln_gamma_1p(j as f64)? / j as f64)
}

/// For `n = 0`: `(k!)^(1/k) / ((k+m)!)^(1/(k+m))`.
///
/// For `n >= 1`: `(k!)^(1/k) ((k+m+n)!)^(1/(k+m+n)) / [((k+m)!)^(1/(k+m)) ((k+n)!)^(1/(k+n))]`.
pub fn factorial_root_ratio(k: u64, m: u64, n: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::range("k", k as i64, 1, MAX_FACTORIAL_INDEX as i64));
    }
    if m < 1 {
        return Err(Error::range("m", m as i64, 1, MAX_FACTORIAL_INDEX as i64));
    }
    let top = k.saturating_add(m).saturating_add(n);
    if top > MAX_FACTORIAL_INDEX {
        return Err(Error::range("k + m + n", top.min(i64::MAX as u64) as i64, 2, MAX_FACTORIAL_INDEX as i64));
    }
    let ln = if n == 0 {
        log_root(k)? - log_root(k + m)?
    } else {
        log_root(k)? + log_root(k + m + n)? - log_root(k + m)? - log_root(k + n)?
    };
    Ok(ln.exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceRow {
    pub k: u64,
    pub value: f64,
    /// `value(k) - value(k-1)`; zero on the first row.
    pub delta: f64,
}

/// Scan of [`factorial_root_ratio`] over `k = 1..=k_max` for fixed `m`, `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorialRootSequence {
    pub m: u64,
    pub n: u64,
    pub rows: Vec<SequenceRow>,
}

impl FactorialRootSequence {
    pub fn scan(m: u64, n: u64, k_max: u64) -> Result<Self> {
        if k_max < 1 {
            return Err(Error::range("k_max", k_max as i64, 1, MAX_FACTORIAL_INDEX as i64));
        }
        let mut rows = Vec::with_capacity(k_max as usize);
        let mut prev: Option<f64> = None;
        for k in 1..=k_max {
            let value = factorial_root_ratio(k, m, n)?;
            let delta = prev.map_or(0.0, |p| value - p);
            rows.push(SequenceRow { k, value, delta });
            prev = Some(value);
        }
        Ok(FactorialRootSequence { m, n, rows })
    }

    pub fn min_delta(&self) -> f64 {
        self.rows.iter().skip(1).map(|r| r.delta).fold(f64::INFINITY, f64::min)
    }

    /// Nondecreasing up to `slack`.
    pub fn is_nondecreasing(&self, slack: f64) -> bool {
        self.rows.len() < 2 || self.min_delta() >= -slack
    }
}
