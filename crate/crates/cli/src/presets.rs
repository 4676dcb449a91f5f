//! Named check configurations, one per result in the catalog.

use anyhow::Result;
use clap::ValueEnum;
use lcm_core::{
    compose, make_provider, power_product, shift_ratio, tau0_estimate, Branch, FamilySpec,
    InnerFunction, OpenInterval, Provider,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// 1/Gamma(x+1)^(1/x) on (-1, 50); expected PASS.
    RecipGammaRoot,
    /// nu_1 on (-1, 50); expected PASS.
    NuAtOne,
    /// nu_0.9 on (1, 10^4); expected FAIL at order 1.
    NuBelowOne,
    /// Gamma(x+1)^(1/x)/x on (0, 1000); expected PASS.
    XRatio,
    /// x^0.1/Gamma(x+1)^(1/x) on (0, 1000); expected FAIL at order 1 near 0.
    XRatioInverse,
    /// (x+1)^a/Gamma(x+1)^(1/x) with a = 1/(1 + tau0(100)) on (-1, 50); expected PASS.
    NuThreshold,
    /// f(x)/f(x+1) for f = 1/Gamma(x+1)^(1/x); expected PASS.
    ShiftForward,
    /// f(x)/f(x-1); expected FAIL at order 1.
    ShiftBackward,
    /// f^2 nu_1^(1/2); expected PASS.
    Product,
    /// f(1 - e^-x) on (0, 50); expected PASS.
    ComposeOneMinusExp,
    /// Q_{1,0} on (1, 100); expected PASS.
    QDecreasing,
}

/// A ready-to-run configuration.
pub struct Built {
    pub provider: Provider,
    pub lo: f64,
    pub hi: f64,
    pub orders: usize,
    pub grid: usize,
}

impl Preset {
    /// Builds the provider, computing derivatives up to at least `orders`.
    pub fn build(self, orders: Option<usize>) -> Result<Built> {
        let (lo, hi, default_orders, grid) = self.defaults();
        let n = orders.unwrap_or(default_orders);
        let base = || make_provider(FamilySpec::recip_gamma_root(), n);
        let provider = match self {
            Preset::RecipGammaRoot => base()?,
            Preset::NuAtOne => make_provider(FamilySpec::nu(1.0), n)?,
            Preset::NuBelowOne => make_provider(FamilySpec::nu(0.9), n)?,
            Preset::XRatio => make_provider(FamilySpec::x_alpha(1.0, Branch::Positive), n)?,
            Preset::XRatioInverse => {
                make_provider(FamilySpec::x_alpha(0.1, Branch::Positive).inverted(), n)?
            }
            Preset::NuThreshold => {
                let alpha = tau0_estimate(100)?.alpha_threshold;
                make_provider(FamilySpec::nu(alpha).inverted(), n)?
            }
            Preset::ShiftForward => shift_ratio(base()?, 1.0)?,
            Preset::ShiftBackward => shift_ratio(base()?, -1.0)?,
            Preset::Product => {
                power_product(vec![(base()?, 2.0), (make_provider(FamilySpec::nu(1.0), n)?, 0.5)])?
            }
            Preset::ComposeOneMinusExp => compose(
                base()?,
                InnerFunction::OneMinusExp,
                OpenInterval::new(0.0, f64::INFINITY)?,
            )?,
            Preset::QDecreasing => make_provider(FamilySpec::q(1.0, 0.0, 1.0), n)?,
        };
        Ok(Built {
            provider,
            lo,
            hi,
            orders: n,
            grid,
        })
    }

    /// `(lo, hi, orders, grid)`.
    fn defaults(self) -> (f64, f64, usize, usize) {
        match self {
            Preset::RecipGammaRoot | Preset::NuAtOne => (-1.0, 50.0, 8, 400),
            Preset::NuBelowOne => (1.0, 1e4, 2, 400),
            Preset::XRatio | Preset::XRatioInverse => (0.0, 1e3, 6, 400),
            Preset::NuThreshold => (-1.0, 50.0, 6, 400),
            Preset::ShiftForward | Preset::Product => (-1.0, 50.0, 6, 200),
            Preset::ShiftBackward | Preset::ComposeOneMinusExp => (0.0, 50.0, 6, 200),
            Preset::QDecreasing => (1.0, 100.0, 4, 400),
        }
    }
}
