use fornberg_whitham::profile::{
    background_shift, build_default_profile, build_profile, crest_height, critical_points, derive_constants, potential, profile_residuals,
    turning_points, Shift, WaveParams,
};
use fornberg_whitham::Error;
use proptest::prelude::*;

fn speed() -> impl Strategy<Value = f64> {
    1.01f64..1.333
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn background_outside_window_is_rejected(c in 0.5f64..3.0, t in prop_oneof![-2.0f64..0.0, 1.0f64..3.0]) {
        let (lo, hi) = WaveParams::background_window(c);
        let k = lo + t * (hi - lo);
        let is_out_of_range = matches!(derive_constants(c, k), Err(Error::ParameterOutOfRange { .. }));
        prop_assert!(is_out_of_range);
    }

    #[test]
    fn background_is_a_double_root(c in 0.5f64..3.0, t in 0.01f64..0.99) {
        let (lo, hi) = WaveParams::background_window(c);
        let p = derive_constants(c, lo + t * (hi - lo)).unwrap();
        let f = potential(p.k, &p).unwrap();
        prop_assert!((f - p.alpha).abs() < 1e-12 * (1.0 + p.alpha.abs()));
        // the factored kinetic term agrees with α - F away from the pole
        for phi in [p.k - 0.2, (p.k + crest_height(c, p.k)) / 2.0] {
            let direct = p.alpha - potential(phi, &p).unwrap();
            prop_assert!((direct - p.kinetic(phi)).abs() < 1e-10 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn critical_points_are_stationary(c in 0.5f64..3.0, t in 0.01f64..0.99) {
        let (lo, hi) = WaveParams::background_window(c);
        let p = derive_constants(c, lo + t * (hi - lo)).unwrap();
        let (phi1, phi2) = critical_points(&p).unwrap();
        prop_assert!((phi1 - p.k).abs() < 1e-9);
        prop_assert!(phi1 < phi2 && phi2 < c);
        let tp = turning_points(&p).unwrap();
        prop_assert!(tp.phi_max > phi2 && tp.phi_max < c);
        for phi in [phi1, phi2] {
            let e = 1e-6;
            let d = (potential(phi + e, &p).unwrap() - potential(phi - e, &p).unwrap()) / (2.0 * e);
            prop_assert!(d.abs() < 1e-6, "F'({}) = {}", phi, d);
        }
    }

    #[test]
    fn profile_shape(c in speed()) {
        let p = build_default_profile(&derive_constants(c, 0.0).unwrap()).unwrap();
        let crest = crest_height(c, 0.0);
        prop_assert!((p.max_value() - crest).abs() < 1e-12);
        prop_assert!(p.symmetry_defect() < 1e-12);
        let mid = p.n / 2;
        for i in mid..p.phi.len() - 1 {
            prop_assert!(p.phi[i + 1] <= p.phi[i]);
            prop_assert!(p.phi[i] >= 0.0 && p.phi[i] <= crest);
        }
        prop_assert!(p.phi[p.phi.len() - 1] < 1e-12);
        let (res2, res1) = profile_residuals(&p);
        prop_assert!(res1 < 1e-8 * p.params.alpha.abs(), "res1 = {}", res1);
        prop_assert!(res2 < 1e-6, "res2 = {}", res2);
    }

    #[test]
    fn lifted_profile_is_the_profile_on_that_background(ce in 1.1f64..1.3, t in 0.05f64..0.95) {
        let zero = build_profile(&derive_constants(ce, 0.0).unwrap(), 150.0, 2048).unwrap();
        let (lo, hi) = WaveParams::background_window(ce);
        // k shifts the window with c = ce + k, which always contains it
        let k = 0.2 * (lo + t * (hi - lo));
        let lifted = background_shift(&zero, Shift::Lift(k)).unwrap();
        let direct = build_profile(&derive_constants(ce + k, k).unwrap(), 150.0, 2048).unwrap();
        prop_assert!((lifted.params.alpha - direct.params.alpha).abs() < 1e-12);
        prop_assert!((lifted.params.beta - direct.params.beta).abs() < 1e-12);
        for (a, b) in lifted.phi.iter().zip(&direct.phi) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let back = background_shift(&lifted, Shift::ToZero).unwrap();
        for (a, b) in back.phi.iter().zip(&zero.phi) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }
}

#[test]
fn speed_outside_unit_interval_is_rejected_with_the_window() {
    let err = derive_constants(0.9, 0.0).unwrap_err();
    assert!(err.to_string().contains("(1, 4/3)"), "{err}");
    assert!(err.is_validation());
}

#[test]
fn domain_too_small_is_reported() {
    let params = derive_constants(1.2, 0.0).unwrap();
    assert!(matches!(
        build_profile(&params, 20.0, 1024),
        Err(Error::DomainTooSmall { .. })
    ));
}
