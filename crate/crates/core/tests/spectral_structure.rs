use fornberg_whitham::profile::{build_default_profile, build_profile, derive_constants};
use fornberg_whitham::spectral::{
    find_negative_eigenvalue, prufer_shoot, spectral_bounds, theta_scan, MatrixOracle, PruferProblem,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn remove(v: &mut [f64], dir: &[f64]) {
    let f = dot(v, dir) / dot(dir, dir);
    for (a, d) in v.iter_mut().zip(dir) {
        *a -= f * d;
    }
}

#[test]
fn one_negative_direction() {
    let c = 1.2;
    let params = derive_constants(c, 0.0).unwrap();
    let profile = build_profile(&params, 100.0, 1024).unwrap();
    let oracle = MatrixOracle::from_profile(&profile);
    let (values, vectors) = oracle.eigenpairs();
    assert!(values[0] < 0.0 && values[1] > -1e-6);

    let neg = &vectors[0];
    assert!(oracle.quadratic_form(neg) < 0.0);

    // orthogonal to the negative direction and to the translation mode
    let kernel: Vec<f64> = profile.phi_x[..1024].to_vec();
    let mut rng = ChaCha20Rng::seed_from_u64(20);
    let x = oracle.grid.nodes();
    for _ in 0..20 {
        let centre = rng.random_range(-10.0..10.0);
        let width = rng.random_range(0.5..5.0);
        let mut v: Vec<f64> = x
            .iter()
            .map(|&xi| (-((xi - centre) / width).powi(2)).exp() * rng.random_range(0.5..1.5))
            .collect();
        for _ in 0..2 {
            remove(&mut v, neg);
            remove(&mut v, &kernel);
        }
        let form = oracle.quadratic_form(&v);
        assert!(form > 0.0, "<Lv, v> = {form}");
    }
}

#[test]
fn oracle_spectrum_lies_in_the_bounds() {
    for c in [1.05, 1.3] {
        let oracle = MatrixOracle::new(c, 1024).unwrap();
        let p = build_default_profile(&derive_constants(c, 0.0).unwrap()).unwrap();
        let (l0, hi) = spectral_bounds(&p).unwrap();
        let ev = oracle.eigenvalues();
        assert!(ev.iter().all(|&l| l >= l0 - 1e-8 && l <= hi + 1e-8));
        let s = oracle.summarize(&ev);
        assert_eq!(s.n_negative, 1);
    }
}

#[test]
fn nonzero_truncation_mismatch_is_reported() {
    let p = build_default_profile(&derive_constants(1.1, 0.0).unwrap()).unwrap();
    let prob = PruferProblem::new(&p, -0.01).unwrap().with_truncation(3.0);
    assert!(prufer_shoot(&prob).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn shooting_structure(c in 1.02f64..1.32) {
        let p = build_default_profile(&derive_constants(c, 0.0).unwrap()).unwrap();
        let scan = theta_scan(&p, 20).unwrap();
        for w in scan.windows(2) {
            prop_assert!(w[1].1 < w[0].1);
        }
        prop_assert!(scan[0].1 >= 0.0);
        prop_assert!((scan[19].1 + std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        let neg = find_negative_eigenvalue(&p).unwrap();
        prop_assert!(neg.lambda_star > scan[0].0 && neg.lambda_star < 0.0);
        prop_assert!(neg.theta.abs() < 1e-8);
    }
}
