//! Closure operations on log-derivative providers: shifted ratios, weighted
//! products and composition with an inner function whose derivative is
//! completely monotonic.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{validate_eval, LogDerivProvider, OpenInterval, Provider};
use crate::error::{Error, Result};
use crate::jets::Jet;

/// `f(x) / f(x + alpha)`.
#[derive(Debug)]
struct ShiftRatio {
    base: Provider,
    alpha: f64,
    domain: OpenInterval,
}

impl LogDerivProvider for ShiftRatio {
    fn describe(&self) -> String {
        format!("f(x)/f(x{:+}) with f = {}", self.alpha, self.base.describe())
    }

    fn domain(&self) -> OpenInterval {
        self.domain
    }

    fn max_order(&self) -> usize {
        self.base.max_order()
    }

    fn eval(&self, x: f64, n: usize) -> Result<f64> {
        validate_eval(self, x, n)?;
        Ok(self.base.eval(x, n)? - self.base.eval(x + self.alpha, n)?)
    }

    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        validate_eval(self, x, order)?;
        let here = self.base.jet(x, order)?;
        let there = self.base.jet(x + self.alpha, order)?.with_center(x);
        here.sub(&there)
    }
}

/// Provider for `f(x) / f(x + alpha)` on `J = I ∩ (I - alpha)`.
pub fn shift_ratio(p: Provider, alpha: f64) -> Result<Provider> {
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shift alpha = {alpha} must be finite and nonzero"
        )));
    }
    let dom = p.domain();
    let domain = dom.intersect(&dom.shifted_back(alpha))?;
    Ok(Arc::new(ShiftRatio {
        base: p,
        alpha,
        domain,
    }))
}

/// `prod_i f_i^(w_i)`.
#[derive(Debug)]
struct PowerProduct {
    items: Vec<(Provider, f64)>,
    domain: OpenInterval,
    max_order: usize,
}

impl LogDerivProvider for PowerProduct {
    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .items
            .iter()
            .map(|(p, w)| format!("[{}]^{w}", p.describe()))
            .collect();
        parts.join(" * ")
    }

    fn domain(&self) -> OpenInterval {
        self.domain
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn eval(&self, x: f64, n: usize) -> Result<f64> {
        validate_eval(self, x, n)?;
        let mut acc = 0.0;
        for (p, w) in &self.items {
            if *w != 0.0 {
                acc += w * p.eval(x, n)?;
            }
        }
        Ok(acc)
    }

    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        validate_eval(self, x, order)?;
        let mut acc = Jet::constant(x, 0.0, order)?;
        for (p, w) in &self.items {
            if *w != 0.0 {
                acc = acc.add(&p.jet(x, order)?.scale(*w)?)?;
            }
        }
        Ok(acc)
    }
}

/// Provider for `prod_i f_i^(w_i)` with nonnegative weights on the common domain.
pub fn power_product(items: Vec<(Provider, f64)>) -> Result<Provider> {
    let Some((first, _)) = items.first() else {
        return Err(Error::InvalidParameter("power product needs at least one factor".into()));
    };
    let mut domain = first.domain();
    let mut max_order = first.max_order();
    for (p, w) in &items {
        if !(*w >= 0.0) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!("weight {w} must be finite and >= 0")));
        }
        domain = domain.intersect(&p.domain())?;
        max_order = max_order.min(p.max_order());
    }
    Ok(Arc::new(PowerProduct {
        items,
        domain,
        max_order,
    }))
}

/// `f(u) = exp(-rate * u)` on the real line, i.e. `ln f = -rate * u`.
#[derive(Debug)]
struct ExpDecay {
    rate: f64,
}

impl LogDerivProvider for ExpDecay {
    fn describe(&self) -> String {
        format!("exp(-{} u)", self.rate)
    }

    fn domain(&self) -> OpenInterval {
        OpenInterval::real_line()
    }

    fn max_order(&self) -> usize {
        super::MAX_FAMILY_ORDER
    }

    fn eval(&self, x: f64, n: usize) -> Result<f64> {
        validate_eval(self, x, n)?;
        Ok(match n {
            0 => -self.rate * x,
            1 => -self.rate,
            _ => 0.0,
        })
    }

    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        validate_eval(self, x, order)?;
        Jet::var(x, order)?.scale(-self.rate)
    }
}

/// The elementary LCM function `exp(-rate * u)` (constant for `rate = 0`).
pub fn exp_decay(rate: f64) -> Result<Provider> {
    if !(rate >= 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!("rate {rate} must be finite and >= 0")));
    }
    Ok(Arc::new(ExpDecay { rate }))
}

/// Inner functions `h` with completely monotonic derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InnerFunction {
    /// `a x^alpha + b` with `a >= 0`, `0 <= alpha <= 1`.
    Power { a: f64, alpha: f64, b: f64 },
    /// `a + b ln(1 + x)` with `b >= 0`.
    LogShift { a: f64, b: f64 },
    /// `1 - exp(-x)`.
    OneMinusExp,
    /// `arctan(sqrt(x))`.
    AtanSqrt,
}

impl fmt::Display for InnerFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InnerFunction::Power { a, alpha, b } => write!(f, "{a} x^{alpha} + {b}"),
            InnerFunction::LogShift { a, b } => write!(f, "{a} + {b} ln(1+x)"),
            InnerFunction::OneMinusExp => write!(f, "1 - exp(-x)"),
            InnerFunction::AtanSqrt => write!(f, "arctan(sqrt(x))"),
        }
    }
}

impl InnerFunction {
    /// Checks the parameter ranges under which `h'` is completely monotonic.
    pub fn validate(&self) -> Result<()> {
        match *self {
            InnerFunction::Power { a, alpha, b } => {
                if !(a.is_finite() && alpha.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidParameter(format!("non-finite parameter in {self}")));
                }
                if a < 0.0 || !(0.0..=1.0).contains(&alpha) {
                    return Err(Error::Unsupported(format!(
                        "{self}: derivative is completely monotonic only for a >= 0 and 0 <= alpha <= 1"
                    )));
                }
            }
            InnerFunction::LogShift { a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidParameter(format!("non-finite parameter in {self}")));
                }
                if b < 0.0 {
                    return Err(Error::Unsupported(format!("{self}: requires b >= 0")));
                }
            }
            InnerFunction::OneMinusExp | InnerFunction::AtanSqrt => {}
        }
        Ok(())
    }

    /// Natural (open) domain of `h`.
    pub fn natural_domain(&self) -> OpenInterval {
        match *self {
            InnerFunction::Power { alpha, .. } if alpha == 0.0 || alpha == 1.0 => {
                OpenInterval::real_line()
            }
            InnerFunction::Power { .. } | InnerFunction::AtanSqrt => OpenInterval {
                lo: 0.0,
                hi: f64::INFINITY,
            },
            InnerFunction::LogShift { .. } => OpenInterval {
                lo: -1.0,
                hi: f64::INFINITY,
            },
            InnerFunction::OneMinusExp => OpenInterval::real_line(),
        }
    }

    /// `h(x)`, including limits at infinite or boundary arguments.
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            InnerFunction::Power { a, alpha, b } => {
                if a == 0.0 || alpha == 0.0 {
                    a * (alpha == 0.0) as u8 as f64 + b
                } else if alpha == 1.0 {
                    a * x + b
                } else {
                    a * x.powf(alpha) + b
                }
            }
            InnerFunction::LogShift { a, b } => {
                if b == 0.0 {
                    a
                } else {
                    a + b * x.ln_1p()
                }
            }
            InnerFunction::OneMinusExp => -(-x).exp_m1(),
            InnerFunction::AtanSqrt => {
                if x == f64::INFINITY {
                    FRAC_PI_2
                } else {
                    x.sqrt().atan()
                }
            }
        }
    }

    /// Jet of `h` at `x`.
    pub fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        let u = Jet::var(x, order)?;
        match *self {
            InnerFunction::Power { a, alpha, b } => {
                if a == 0.0 || alpha == 0.0 {
                    Jet::constant(x, self.value(x), order)
                } else if alpha == 1.0 {
                    u.scale(a)?.add_scalar(b)
                } else {
                    u.pow(alpha)?.scale(a)?.add_scalar(b)
                }
            }
            InnerFunction::LogShift { a, b } => u.add_scalar(1.0)?.ln()?.scale(b)?.add_scalar(a),
            InnerFunction::OneMinusExp => u.scale(-1.0)?.exp()?.scale(-1.0)?.add_scalar(1.0),
            InnerFunction::AtanSqrt => u.sqrt()?.atan(),
        }
    }
}

#[derive(Debug)]
struct Composition {
    outer: Provider,
    inner: InnerFunction,
    domain: OpenInterval,
}

impl LogDerivProvider for Composition {
    fn describe(&self) -> String {
        format!("f(h(x)) with f = {}, h = {}", self.outer.describe(), self.inner)
    }

    fn domain(&self) -> OpenInterval {
        self.domain
    }

    fn max_order(&self) -> usize {
        self.outer.max_order().min(crate::jets::MAX_ORDER)
    }

    fn eval(&self, x: f64, n: usize) -> Result<f64> {
        Ok(self.jet(x, n)?.derivative(n))
    }

    fn jet(&self, x: f64, order: usize) -> Result<Jet> {
        validate_eval(self, x, order)?;
        let h = self.inner.jet(x, order)?;
        let outer = self.outer.jet(h.value(), order)?;
        outer.compose(&h)
    }
}

/// Provider for `f(h(x))` on `on`, where `h` comes from the built-in catalog.
///
/// Fails when `h` is outside the catalog's parameter ranges, when `on` leaves
/// the natural domain of `h`, or when `h(on)` is not inside the domain of `f`.
pub fn compose(p: Provider, inner: InnerFunction, on: OpenInterval) -> Result<Provider> {
    inner.validate()?;
    let nat = inner.natural_domain();
    if on.lo < nat.lo || on.hi > nat.hi {
        return Err(Error::RangeViolation(format!(
            "interval {on} leaves the domain {nat} of h = {inner}"
        )));
    }
    // h is nondecreasing, so the image of (lo, hi) is bounded by the end values.
    let (img_lo, img_hi) = (inner.value(on.lo), inner.value(on.hi));
    let target = p.domain();
    let constant = img_lo == img_hi;
    let inside = if constant {
        target.contains(img_lo)
    } else {
        img_lo >= target.lo && img_hi <= target.hi
    };
    if !inside {
        return Err(Error::RangeViolation(format!(
            "h({on}) = [{img_lo}, {img_hi}] is not inside the domain {target} of {}",
            p.describe()
        )));
    }
    Ok(Arc::new(Composition {
        outer: p,
        inner,
        domain: on,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_provider, FamilySpec};
    use crate::specfun::factorial;

    fn rgr(order: usize) -> Provider {
        make_provider(FamilySpec::recip_gamma_root(), order).unwrap()
    }

    #[test]
    fn shift_ratio_domain_and_values() {
        let p = shift_ratio(rgr(6), 1.0).unwrap();
        assert_eq!(p.domain().lo, -1.0);
        let q = shift_ratio(rgr(6), -1.0).unwrap();
        assert_eq!(q.domain().lo, 0.0);
        let base = rgr(6);
        let x = 0.7;
        let want = base.eval(x, 3).unwrap() - base.eval(x + 1.0, 3).unwrap();
        assert_eq!(p.eval(x, 3).unwrap(), want);
        assert!(shift_ratio(rgr(6), 0.0).is_err());
        // a bounded domain can be shifted out of existence
        let neg = make_provider(crate::families::FamilySpec::x_alpha(0.0, crate::families::Branch::Negative), 4)
            .unwrap();
        assert!(shift_ratio(neg, 2.0).is_err());
    }

    #[test]
    fn power_product_linearity() {
        let single = power_product(vec![(rgr(4), 1.0)]).unwrap();
        let base = rgr(4);
        for n in 0..=4 {
            assert_eq!(single.eval(1.3, n).unwrap(), base.eval(1.3, n).unwrap());
        }
        let zero = power_product(vec![(rgr(4), 0.0), (rgr(4), 0.0)]).unwrap();
        for n in 0..=4 {
            assert_eq!(zero.eval(2.0, n).unwrap(), 0.0);
        }
        assert!(power_product(vec![(rgr(4), -1.0)]).is_err());
        assert!(power_product(vec![]).is_err());
        let x_only = make_provider(FamilySpec::x_alpha(1.0, crate::families::Branch::Positive), 3).unwrap();
        let mixed = power_product(vec![(rgr(6), 1.0), (x_only, 2.0)]).unwrap();
        assert_eq!(mixed.domain().lo, 0.0);
        assert_eq!(mixed.max_order(), 3);
    }

    #[test]
    fn compose_exp_decay_with_log_shift() {
        // ln f(h(x)) = -ln(1+x)
        let f = exp_decay(1.0).unwrap();
        let h = InnerFunction::LogShift { a: 0.0, b: 1.0 };
        let c = compose(f, h, OpenInterval::new(-0.5, 10.0).unwrap()).unwrap();
        let x: f64 = 0.8;
        for n in 1..=8 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let want = sign * factorial(n - 1) / (1.0 + x).powi(n as i32);
            let got = c.eval(x, n).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs(), "n={n}: {got} vs {want}");
        }
    }

    #[test]
    fn compose_rejects_bad_inner_and_ranges() {
        let sq = InnerFunction::Power { a: 1.0, alpha: 2.0, b: 0.0 };
        assert!(matches!(
            compose(rgr(4), sq, OpenInterval::new(1.0, 2.0).unwrap()),
            Err(Error::Unsupported(_))
        ));
        // h(x) = x - 3 maps (0, 1) to (-3, -2), outside (-1, inf)
        let shift = InnerFunction::Power { a: 1.0, alpha: 1.0, b: -3.0 };
        assert!(matches!(
            compose(rgr(4), shift, OpenInterval::new(0.0, 1.0).unwrap()),
            Err(Error::RangeViolation(_))
        ));
        assert!(compose(rgr(4), InnerFunction::AtanSqrt, OpenInterval::new(-1.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn inner_limits() {
        assert_eq!(InnerFunction::OneMinusExp.value(f64::INFINITY), 1.0);
        assert_eq!(InnerFunction::AtanSqrt.value(f64::INFINITY), FRAC_PI_2);
        let c = InnerFunction::Power { a: 0.0, alpha: 0.5, b: 2.0 };
        assert_eq!(c.value(f64::INFINITY), 2.0);
        let l = InnerFunction::LogShift { a: 1.0, b: 0.0 };
        assert_eq!(l.value(-1.0), 1.0);
    }

    #[test]
    fn composition_matches_finite_values() {
        let f = rgr(6);
        let c = compose(f.clone(), InnerFunction::AtanSqrt, OpenInterval::new(0.0, 20.0).unwrap()).unwrap();
        let x: f64 = 2.0;
        let u = x.sqrt().atan();
        assert!((c.eval(x, 0).unwrap() - f.eval(u, 0).unwrap()).abs() < 1e-15);
        // chain rule: [ln f(h)]' = (ln f)'(h) h'
        let dh = 1.0 / (2.0 * x.sqrt() * (1.0 + x));
        let want = f.eval(u, 1).unwrap() * dh;
        assert!((c.eval(x, 1).unwrap() - want).abs() < 1e-14);
    }
}
