use fornberg_whitham::functionals::{first_variation_residual, lyapunov};
use fornberg_whitham::nonlocal::{Field, LineField, LineGrid};
use fornberg_whitham::profile::{build_profile, derive_constants};
use proptest::prelude::*;

#[test]
fn zero_is_a_critical_point() {
    let params = derive_constants(1.2, 0.0).unwrap();
    let mut p = build_profile(&params, 100.0, 2048).unwrap();
    p.phi.iter_mut().for_each(|v| *v = 0.0);
    assert_eq!(first_variation_residual(&p).unwrap().0, 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // the central difference of H along v matches the pairing with the gradient
    #[test]
    fn gradient_is_the_derivative(x0 in -5.0f64..5.0, w in 0.5f64..3.0, a in -1.0f64..1.0) {
        let c = 1.2;
        let params = derive_constants(c, 0.0).unwrap();
        let p = build_profile(&params, 100.0, 4096).unwrap();
        let u = p.field();
        let v = LineField::from_fn(u.grid(), |x| a * (-((x - x0) / w).powi(2)).exp() + 0.3 * (x / 4.0).sin() * (-x * x / 50.0).exp());
        let along = |e: f64| u.with_values(u.values().iter().zip(v.values()).map(|(p, q)| p + e * q).collect());
        let (_, grad) = first_variation_residual(&p).unwrap();
        let pairing = grad.l2_inner(&v).unwrap();
        let fd = |e: f64| (lyapunov(&along(e), c) - lyapunov(&along(-e), c)) / (2.0 * e);
        let (e1, e2) = (1e-2, 5e-3);
        let (err1, err2) = ((fd(e1) - pairing).abs(), (fd(e2) - pairing).abs());
        // cubic functional: the error is exactly quadratic in ε
        prop_assert!(err2 < 0.26 * err1 + 1e-12, "{} {}", err1, err2);
        prop_assert!(err1 < 1e-3);
    }
}

#[test]
fn line_grid_pairing_is_symmetric() {
    let g = LineGrid::new(10.0, 400);
    let a = LineField::from_fn(g, |x| (-x * x).exp());
    let b = LineField::from_fn(g, |x| x * (-x * x / 2.0).exp() + 0.2);
    assert!((a.h1_inner(&b).unwrap() - b.h1_inner(&a).unwrap()).abs() < 1e-15);
}
