//! Numerical certification of logarithmically completely monotonic (LCM)
//! properties of gamma-function families.
//!
//! A positive function `f` is LCM on an interval when `(-1)^n [ln f]^(n) >= 0`
//! for every `n >= 1`. This crate provides the special functions, a truncated
//! Taylor-series ("jet") engine, closed-form log-derivative providers for the
//! gamma families, a grid checker with a finite-difference oracle, and the
//! analysis of the two-variable bound function `tau(s, t)`.

pub mod error;
pub mod families;
pub mod jets;
pub mod lcm_check;
pub mod quad;
pub mod specfun;
pub mod tau_lab;

pub use error::{Error, Result};
pub use families::{
    compose, make_provider, power_product, shift_ratio, Branch, FamilyKind, FamilySpec,
    InnerFunction, LogDerivProvider, OpenInterval, Provider,
};
pub use jets::Jet;
pub use lcm_check::{check_lcm, fd_oracle, min_signed_derivative, CheckOptions, CheckReport, Interval, Verdict};
pub use specfun::{asym_eval, digamma, ln_gamma, polygamma, zeta_int, AsymptoticSeries, SeriesKind, EULER_GAMMA};
pub use tau_lab::{
    hirsch_constant, tau, tau0_estimate, tau0_lower_bound, tau_max, tau_ray_bound, tau_ray_gap, Tau0Estimate,
    TauResult,
};
