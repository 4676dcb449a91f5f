//! Reference values computed with 40-digit arithmetic.

use std::f64::consts::PI;

use lcm_core::families::{g_derivs, h_n, limit_probe_table};
use lcm_core::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn gamma_family_values() {
    assert!(rel(ln_gamma(0.5).unwrap(), 0.572_364_942_924_700_087_1) < 1e-14);
    assert!(rel(digamma(0.5).unwrap(), -1.963_510_026_021_423_479) < 1e-14);
    assert!(rel(digamma(2.0).unwrap(), 1.0 - EULER_GAMMA) < 1e-14);
    assert!(rel(polygamma(2, 1.0).unwrap(), -2.0 * zeta_int(3).unwrap()) < 1e-13);
    assert!(rel(polygamma(1, 2.0).unwrap(), PI * PI / 6.0 - 1.0) < 1e-13);
    assert!(rel(zeta_int(40).unwrap(), 1.000_000_000_000_909_494_784) < 1e-15);
    assert!(rel(zeta_int(4).unwrap(), PI.powi(4) / 90.0) < 1e-15);
    assert!(ln_gamma(0.0).is_err());
    assert!(digamma(-1.0).is_err());
    assert!(polygamma(0, 1.0).is_err());
    assert!(zeta_int(1).is_err());
}

#[test]
fn asymptotic_examples() {
    let lg1 = AsymptoticSeries::new(SeriesKind::LnGamma, 1).unwrap();
    let dg1 = AsymptoticSeries::new(SeriesKind::Digamma, 1).unwrap();
    assert!((asym_eval(lg1, 10.0).unwrap() - ln_gamma(10.0).unwrap()).abs() < 1e-4);
    assert!((asym_eval(dg1, 10.0).unwrap() - digamma(10.0).unwrap()).abs() < 1e-4);
    let lg0 = AsymptoticSeries::new(SeriesKind::LnGamma, 0).unwrap();
    let want = -1.0 + 0.5 * (2.0 * PI).ln();
    assert!((asym_eval(lg0, 1.0).unwrap() - want).abs() < 1e-15);
    assert!(asym_eval(lg0, 0.5).is_err());
    assert!(AsymptoticSeries::new(SeriesKind::Digamma, 11).is_err());
}

#[test]
fn g_and_probe_values() {
    assert!(rel(g_derivs(1, 0.0).unwrap(), PI * PI / 12.0) < 1e-14);
    assert!(rel(h_n(1, 1.0).unwrap(), 1.0 - EULER_GAMMA) < 1e-14);
    let limit = -PI * PI / 12.0;
    let expected_err = [7.933_36e-3, 8.005_60e-4, 8.012_90e-5, 8.013_63e-6];
    for (row, want) in limit_probe_table(2, 5).unwrap().iter().zip(expected_err) {
        assert!(rel(row.value - limit, want) < 1e-5, "x={} err {}", row.x, row.value - limit);
    }
}

#[test]
fn hirsch_golden_value() {
    let c = hirsch_constant(10_000).unwrap();
    assert!((c + 0.301_640_320_467_533_197_9).abs() < 1e-14);
}

#[test]
fn tau_profile_is_increasing_up_to_100() {
    let e = tau0_estimate(100).unwrap();
    assert!(e.profile.windows(2).all(|w| w[0].tau_max < w[1].tau_max));
    assert!(e.tau0 < 0.3);
    let known = [(10.0, 0.288_086_590_593_498_84), (50.0, 0.296_124_944_732_791_19)];
    for (s, v) in known {
        let r = &e.profile[s as usize - 1];
        assert!((r.tau_max - v).abs() < 1e-14, "s={s}");
    }
    for x in [0.25, 1.0, 3.0, 10.0, 50.0] {
        assert!(tau0_lower_bound(x).unwrap() <= e.tau0);
    }
}
