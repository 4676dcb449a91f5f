//! Log-derivative providers for the gamma-function families and the
//! combinators that preserve logarithmic complete monotonicity.

mod combinators;
pub mod gfun;
mod sequences;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jets::Jet;

pub use combinators::{compose, exp_decay, power_product, shift_ratio, InnerFunction};
pub use gfun::{
    g_derivs, g_jet, g_quadrature, gamma_limit_probe, h_n, limit_probe_table, mu_alpha_n, ProbeRow,
    MAX_FAMILY_ORDER,
};
pub use sequences::{factorial_root_ratio, FactorialRootSequence, SequenceRow, MAX_FACTORIAL_INDEX};

/// Open interval `(lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpenInterval {
    pub lo: f64,
    pub hi: f64,
}

impl OpenInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::EmptyDomain(format!("({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// `[a, b]` lies strictly inside.
    pub fn contains_closed(&self, a: f64, b: f64) -> bool {
        a > self.lo && b < self.hi
    }

    pub fn intersect(&self, other: &OpenInterval) -> Result<OpenInterval> {
        OpenInterval::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// `{x : x + offset in self}`.
    pub fn shifted_back(&self, offset: f64) -> OpenInterval {
        OpenInterval {
            lo: self.lo - offset,
            hi: self.hi - offset,
        }
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// Anything that can report derivatives of `ln f` on an open interval.
///
/// `eval(x, 0)` is `ln f(x)` itself. `jet` returns the Taylor jet of `ln f`
/// at `x` and is the cross-check route for the closed forms in `eval`.
pub trait LogDerivProvider: Send + Sync + fmt::Debug {
    fn describe(&self) -> String;

    fn domain(&self) -> OpenInterval;

    fn max_order(&self) -> usize;

    fn eval(&self, x: f64, n: usize) -> Result<f64>;

    fn jet(&self, x: f64, order: usize) -> Result<Jet>;
}

pub type Provider = Arc<dyn LogDerivProvider>;

pub(crate) fn validate_eval(p: &dyn LogDerivProvider, x: f64, n: usize) -> Result<()> {
    if n > p.max_order() {
        return Err(Error::range("derivative order", n as i64, 0, p.max_order() as i64));
    }
    if !x.is_finite() || !p.domain().contains(x) {
        return Err(Error::RangeViolation(format!(
            "x = {x} outside the domain {} of {}",
            p.domain(),
            p.describe()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `1 / Gamma(x+1)^(1/x)` on `(-1, inf)`.
    RecipGammaRoot,
    /// `nu_alpha(x) = Gamma(x+1)^(1/x) / (x+1)^alpha` on `(-1, inf)`.
    NuAlpha,
    /// `Gamma(x+1)^(1/x) / x^alpha` on `(0, inf)` or `(-1, 0)`.
    XAlphaRatio,
    /// `[Q_{a,b}(x)]^c` with `Q_{a,b} = Gamma(x+a+1)^(1/(x+a)) / Gamma(x+b+1)^(1/(x+b))`.
    QAb,
}

/// Which half-line carries an `XAlphaRatio` family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Positive,
    Negative,
}

/// Declarative description of one family member.
///
/// `invert` selects the reciprocal `1/f`, which negates every log-derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c_power: f64,
    pub invert: bool,
    pub branch: Branch,
}

impl FamilySpec {
    fn base(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            alpha: 0.0,
            a: 0.0,
            b: 0.0,
            c_power: 1.0,
            invert: false,
            branch: Branch::Positive,
        }
    }

    pub fn recip_gamma_root() -> Self {
        Self::base(FamilyKind::RecipGammaRoot)
    }

    pub fn nu(alpha: f64) -> Self {
        FamilySpec {
            alpha,
            ..Self::base(FamilyKind::NuAlpha)
        }
    }

    pub fn x_alpha(alpha: f64, branch: Branch) -> Self {
        FamilySpec {
            alpha,
            branch,
            ..Self::base(FamilyKind::XAlphaRatio)
        }
    }

    pub fn q(a: f64, b: f64, c_power: f64) -> Self {
        FamilySpec {
            a,
            b,
            c_power,
            ..Self::base(FamilyKind::QAb)
        }
    }

    pub fn inverted(self) -> Self {
        FamilySpec {
            invert: !self.invert,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("a", self.a), ("b", self.b), ("c", self.c_power)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} is not finite")));
            }
        }
        if self.branch == Branch::Negative {
            if self.kind != FamilyKind::XAlphaRatio {
                return Err(Error::InvalidParameter(
                    "the negative branch exists only for the x^alpha family".into(),
                ));
            }
            if self.alpha.fract() != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "alpha = {} must be an integer on (-1, 0)",
                    self.alpha
                )));
            }
            if self.alpha % 2.0 != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "odd alpha = {} makes x^alpha negative on (-1, 0)",
                    self.alpha
                )));
            }
        }
        if self.kind == FamilyKind::QAb && !(self.c_power > 0.0) {
            return Err(Error::InvalidParameter(format!("c = {} must be positive", self.c_power)));
        }
        Ok(())
    }

    pub fn domain(&self) -> OpenInterval {
        match (self.kind, self.branch) {
            (FamilyKind::XAlphaRatio, Branch::Positive) => OpenInterval { lo: 0.0, hi: f64::INFINITY },
            (FamilyKind::XAlphaRatio, Branch::Negative) => OpenInterval { lo: -1.0, hi: 0.0 },
            (FamilyKind::QAb, _) => OpenInterval {
                lo: -(1.0 + self.a.min(self.b)),
                hi: f64::INFINITY,
            },
            _ => OpenInterval { lo: -1.0, hi: f64::INFINITY },
        }
    }

    pub fn describe(&self) -> String {
        let body = match self.kind {
            FamilyKind::RecipGammaRoot => "1/Gamma(x+1)^(1/x)".to_string(),
            FamilyKind::NuAlpha => format!("Gamma(x+1)^(1/x)/(x+1)^{}", self.alpha),
            FamilyKind::XAlphaRatio => {
                let side = match self.branch {
                    Branch::Positive => "x>0",
                    Branch::Negative => "-1<x<0",
                };
                format!("Gamma(x+1)^(1/x)/x^{} [{side}]", self.alpha)
            }
            FamilyKind::QAb => format!("Q_(a={},b={})^{}", self.a, self.b, self.c_power),
        };
        if self.invert {
            format!("1/[{body}]")
        } else {
            body
        }
    }
}

#[derive(Debug, Clone)]
struct FamilyProvider {
    spec: FamilySpec,
    max_order: usize,
}

impl FamilyProvider {
    fn sign(&self) -> f64 {
        if self.spec.invert {
            -1.0
        } else {
            1.0
        }
    }
}

impl LogDerivProvider for FamilyProvider {
    fn describe(&self) -> String {
        self.spec.describe()
    }

    fn domain(&self) -> OpenInterval {
        self.spec.domain()
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn eval(&self, x: f64, n: usize) -> Result<f64> {
        validate_eval(self, x, n)?;
        let s = &self.spec;
        let v = match s.kind {
            FamilyKind::RecipGammaRoot => -g_derivs(n, x)?,
            FamilyKind::NuAlpha => g_derivs(n, x)? - s.alpha * gfun::dlog1p(n, x),
            FamilyKind::XAlphaRatio => g_derivs(n, x)? - s.alpha * gfun::dlog_abs(n, x),
            FamilyKind::QAb => s.c_power * (g_derivs(n, x + s.a)? - g_derivs(n, x + s.b)?),
        };
        if !v.is_finite() {
            return Err(Error::NonFinite { x, order: n });
        }
        Ok(self.sign() * v)
    }

    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        validate_eval(self, x, order)?;
        let s = &self.spec;
        let j = match s.kind {
            FamilyKind::RecipGammaRoot => g_jet(x, order)?.scale(-1.0)?,
            FamilyKind::NuAlpha => {
                let log1p = Jet::var(x, order)?.add_scalar(1.0)?.ln()?;
                g_jet(x, order)?.sub(&log1p.scale(s.alpha)?)?
            }
            FamilyKind::XAlphaRatio => {
                let u = Jet::var(x, order)?;
                let log_abs = if x > 0.0 { u.ln()? } else { u.scale(-1.0)?.ln()? };
                g_jet(x, order)?.sub(&log_abs.scale(s.alpha)?)?
            }
            FamilyKind::QAb => {
                let ga = g_jet(x + s.a, order)?.with_center(x);
                let gb = g_jet(x + s.b, order)?.with_center(x);
                ga.sub(&gb)?.scale(s.c_power)?
            }
        };
        j.scale(self.sign())
    }
}

/// Builds the closed-form provider for a family.
pub fn make_provider(spec: FamilySpec, max_order: usize) -> Result<Provider> {
    spec.validate()?;
    if max_order > MAX_FAMILY_ORDER {
        return Err(Error::range("max order", max_order as i64, 0, MAX_FAMILY_ORDER as i64));
    }
    Ok(Arc::new(FamilyProvider { spec, max_order }))
}
