//! Conserved functionals and the first variation of the Lyapunov functional.
//!
//! `E(u) = ∫(-u³/6 - u·G∗u/2)`, `Q(u) = ½∫u²` and `𝓗 = E + cQ`. The
//! stability index works with `∫u²` instead (twice `Q`); both are exposed and
//! named separately.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlocal::{Field, LineField};
use crate::profile::ProfileGrid;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalValues {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub c: f64,
}

pub fn energy_e<F: Field>(u: &F) -> f64 {
    let gu = u.helmholtz_inverse();
    let data: Vec<f64> = u
        .values()
        .iter()
        .zip(gu.values())
        .map(|(a, g)| -a * a * a / 6.0 - a * g / 2.0)
        .collect();
    u.integrate(&data)
}

/// `½∫u²`.
pub fn charge_q<F: Field>(u: &F) -> f64 {
    let data: Vec<f64> = u.values().iter().map(|a| a * a).collect();
    0.5 * u.integrate(&data)
}

/// `∫u²`, the normalization in which `d'(c)` equals the charge of the wave.
pub fn squared_mass<F: Field>(u: &F) -> f64 {
    2.0 * charge_q(u)
}

pub fn lyapunov<F: Field>(u: &F, c: f64) -> f64 {
    energy_e(u) + c * charge_q(u)
}

pub fn evaluate<F: Field>(u: &F, c: f64) -> FunctionalValues {
    let e = energy_e(u);
    let q = charge_q(u);
    FunctionalValues { e, q, h: e + c * q, c }
}

/// Gradient of `𝓗` at `u`: `-u²/2 - G∗u + cu`.
pub fn lyapunov_gradient<F: Field>(u: &F, c: f64) -> F {
    let gu = u.helmholtz_inverse();
    let r = u
        .values()
        .iter()
        .zip(gu.values())
        .map(|(a, g)| -a * a / 2.0 - g + c * a)
        .collect();
    u.with_values(r)
}

/// Largest nodal value of the gradient of `𝓗` at the wave, with the
/// gradient field itself. Only defined for zero background.
pub fn first_variation_residual(p: &ProfileGrid) -> Result<(f64, LineField)> {
    if p.params.k != 0.0 {
        return Err(Error::NonzeroBackground(p.params.k));
    }
    let r = lyapunov_gradient(&p.field(), p.params.c);
    let max = r.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((max, r))
}

/// JSON fragment `{E, Q, H, first_variation_residual}`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FunctionalsReport {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub first_variation_residual: f64,
}

pub fn report(p: &ProfileGrid) -> Result<FunctionalsReport> {
    let vals = evaluate(&p.field(), p.params.c);
    let (res, _) = first_variation_residual(p)?;
    Ok(FunctionalsReport {
        e: vals.e,
        q: vals.q,
        h: vals.h,
        first_variation_residual: res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlocal::{LineGrid, PeriodicField, PeriodicGrid};
    use crate::profile::{build_profile, derive_constants};
    use std::f64::consts::PI;

    fn wave(c: f64) -> ProfileGrid {
        build_profile(&derive_constants(c, 0.0).unwrap(), 100.0, 4096).unwrap()
    }

    #[test]
    fn zero_field() {
        let u = LineField::from_fn(LineGrid::new(10.0, 512), |_| 0.0);
        assert_eq!(energy_e(&u), 0.0);
        assert_eq!(charge_q(&u), 0.0);
    }

    #[test]
    fn charge_of_sine_mode() {
        let l = 12.0;
        let u = PeriodicField::from_fn(PeriodicGrid::new(l, 256), |x| (PI * x / l).sin());
        assert!((charge_q(&u) - l / 2.0).abs() < 1e-13);
    }

    #[test]
    fn wave_energy_is_negative() {
        let p = wave(1.2);
        let v = evaluate(&p.field(), 1.2);
        assert!(v.e < 0.0);
        assert_eq!(v.h, v.e + 1.2 * v.q);
    }

    #[test]
    fn energy_parity() {
        let p = wave(1.2);
        let u = p.field();
        let neg = u.with_values(u.values().iter().map(|v| -v).collect());
        let gu = u.helmholtz_inverse();
        let cross = u.l2_inner(&gu).unwrap();
        assert!((energy_e(&u) + energy_e(&neg) + cross).abs() < 1e-12);
    }

    #[test]
    fn wave_is_a_critical_point() {
        let p = wave(1.2);
        let (res, field) = first_variation_residual(&p).unwrap();
        assert!(res < 1e-6, "residual {res}");
        assert_eq!(field.values().len(), p.phi.len());
    }

    #[test]
    fn residual_converges_under_refinement() {
        let params = derive_constants(1.2, 0.0).unwrap();
        let a = first_variation_residual(&build_profile(&params, 100.0, 2048).unwrap())
            .unwrap()
            .0;
        let b = first_variation_residual(&build_profile(&params, 100.0, 4096).unwrap())
            .unwrap()
            .0;
        // at least second order
        assert!(b < a / 3.5, "{a} -> {b}");
    }

    #[test]
    fn perturbation_is_detected() {
        let p = wave(1.2);
        let mut bumped = p.clone();
        for (x, v) in bumped.x.iter().zip(bumped.phi.iter_mut()) {
            *v += 0.01 * (-x * x).exp();
        }
        assert!(first_variation_residual(&bumped).unwrap().0 > 1e-3);
    }

    #[test]
    fn nonzero_background_rejected() {
        let p = build_profile(&derive_constants(2.0, 5.0 / 6.0).unwrap(), 100.0, 2048).unwrap();
        assert!(matches!(
            first_variation_residual(&p),
            Err(Error::NonzeroBackground(_))
        ));
    }

    #[test]
    fn line_and_periodic_values_agree() {
        let p = wave(1.2);
        let line = evaluate(&p.field(), 1.2);
        let per = evaluate(&p.periodic(), 1.2);
        assert!(((line.e - per.e) / line.e).abs() < 1e-8);
        assert!(((line.q - per.q) / line.q).abs() < 1e-8);
    }
}
