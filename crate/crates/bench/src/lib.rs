//! Fixed workloads shared by the benchmarks.

use lcm_core::lcm_check::DEFAULT_MARGIN;
use lcm_core::{make_provider, CheckOptions, FamilySpec, Interval, Provider};

/// Sample points spanning the series branch, the moderate range and Stirling.
pub const SAMPLE_X: [f64; 6] = [-0.9, -0.1, 0.2, 1.5, 9.0, 80.0];

pub fn recip_gamma_root(orders: usize) -> Provider {
    make_provider(FamilySpec::recip_gamma_root(), orders).expect("valid family")
}

/// The checked interval (-1, 50) with the default end margin.
pub fn standard_interval(p: &Provider) -> Interval {
    Interval::inside(&p.domain(), -1.0, 50.0, DEFAULT_MARGIN).expect("non-empty interval")
}

pub fn options(parallel: bool) -> CheckOptions {
    CheckOptions {
        parallel,
        ..CheckOptions::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lcm_core::{check_lcm, Verdict};

    #[test]
    fn workload_is_valid() {
        let p = recip_gamma_root(4);
        let r = check_lcm(&*p, &standard_interval(&p), 4, 32, &options(false)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
