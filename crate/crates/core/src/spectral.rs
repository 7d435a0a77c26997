//! Spectrum of the linearized operator `𝓛 = (c - φ₀) - (1 - ∂ₓ²)⁻¹`.
//!
//! With `p = (1 - ∂ₓ²)⁻¹ v` the eigenvalue problem `𝓛v = λv` becomes
//! `p'' = A(x, λ) p`, `A = 1 - 1/(c - φ₀ - λ)`. In polar coordinates
//! `(p, p') = ρ(cos θ, sin θ)` the angle obeys `θ' = A cos²θ - sin²θ`.
//! Shooting from the left tail with the decaying asymptotic angle
//! `arctan √A∞`, an eigenvalue is detected by `θ(0) = -mπ/2`. The angle is
//! integrated as a continuous quantity so windings are counted.
//!
//! An independent check is provided by [`MatrixOracle`], a dense symmetric
//! discretization of `𝓛` on a periodic grid with the exact Fourier symbol for
//! the Helmholtz inverse.

use std::f64::consts::FRAC_PI_2;

use faer::{Mat, Side};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlocal::{Field, Fourier, LineField, PeriodicGrid};
use crate::ode::Dopri5;
use crate::profile::{build_default_profile, build_profile, derive_constants, ProfileGrid, TAIL_TOL};
use crate::roots::bisect;

/// Tolerance on `|A(-X, λ) - A∞(λ)|` at the truncation point.
pub const TRUNCATION_TOL: f64 = 1e-10;
pub const LAMBDA_TOL: f64 = 1e-12;

/// Endpoints `[c - 1, c)` of the essential spectrum.
pub fn essential_spectrum(c: f64) -> (f64, f64) {
    // inf over r of c - 1/(1 + r²) is attained at r = 0
    (dispersion(c, 0.0), c)
}

/// `λ(r) = c - 1/(1 + r²)`, the spectrum of the constant-coefficient limit.
pub fn dispersion(c: f64, r: f64) -> f64 {
    c - 1.0 / (1.0 + r * r)
}

fn require_zero_background(p: &ProfileGrid) -> Result<()> {
    if p.params.k != 0.0 {
        return Err(Error::NonzeroBackground(p.params.k));
    }
    Ok(())
}

/// `(λ₀, c)` with `λ₀ = c - 1 - max φ₀`; the spectrum lies in `[λ₀, c]`.
pub fn spectral_bounds(p: &ProfileGrid) -> Result<(f64, f64)> {
    require_zero_background(p)?;
    let c = p.params.c;
    Ok((c - 1.0 - p.max_value(), c))
}

/// Prüfer-angle shooting setup for one spectral parameter.
#[derive(Debug, Clone, Copy)]
pub struct PruferProblem<'a> {
    profile: &'a ProfileGrid,
    lambda: f64,
    truncation: f64,
}

impl<'a> PruferProblem<'a> {
    pub fn new(profile: &'a ProfileGrid, lambda: f64) -> Result<Self> {
        require_zero_background(profile)?;
        Ok(Self {
            profile,
            lambda,
            truncation: default_truncation(profile),
        })
    }

    pub fn with_truncation(mut self, x: f64) -> Self {
        self.truncation = x;
        self
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// `A(x, λ) = 1 - 1/(c - φ₀(x) - λ)`.
    pub fn coefficient(&self, x: f64) -> f64 {
        let c = self.profile.params.c;
        1.0 - 1.0 / (c - self.profile.interpolate(x) - self.lambda)
    }

    /// `A∞(λ) = 1 - 1/(c - λ)`.
    pub fn asymptotic(&self) -> f64 {
        1.0 - 1.0 / (self.profile.params.c - self.lambda)
    }
}

/// First node past which the profile is below the tail tolerance.
fn default_truncation(p: &ProfileGrid) -> f64 {
    let m = p.n / 2;
    (m..p.phi.len())
        .find(|&i| p.phi[i].abs() < TAIL_TOL)
        .map(|i| p.x[i])
        .unwrap_or(p.half_width)
}

/// `θ⁺(0, λ)`: the Prüfer angle at the origin of the solution decaying as
/// `x → -∞`.
pub fn prufer_shoot(prob: &PruferProblem<'_>) -> Result<f64> {
    let x_left = -prob.truncation;
    let a_inf = prob.asymptotic();
    let mismatch = (prob.coefficient(x_left) - a_inf).abs();
    if !(mismatch <= TRUNCATION_TOL) {
        return Err(Error::TruncationTooSmall { mismatch });
    }
    let theta0 = a_inf.sqrt().atan();
    let solver = Dopri5::new(1e-12, 1e-13);
    let mut step = 0.0;
    let rhs = |x: f64, th: &[f64; 1]| {
        let (s, c) = th[0].sin_cos();
        [prob.coefficient(x) * c * c - s * s]
    };
    let out = solver.integrate(rhs, x_left, [theta0], 0.0, &mut step)?;
    Ok(out[0])
}

/// Result of the bisection for the negative eigenvalue.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NegativeEigenvalue {
    pub lambda_star: f64,
    /// `θ⁺(0, λ*)`, zero at an exact root.
    pub theta: f64,
    pub iterations: usize,
}

/// The unique root of `θ⁺(0, λ) = 0` on `(λ₀, 0)`.
pub fn find_negative_eigenvalue(p: &ProfileGrid) -> Result<NegativeEigenvalue> {
    let (lambda0, _) = spectral_bounds(p)?;
    let theta_at = |lam: f64| PruferProblem::new(p, lam).and_then(|pr| prufer_shoot(&pr));
    let t0 = theta_at(lambda0)?;
    if t0 < 0.0 {
        return Err(Error::BracketFailure { theta: t0 });
    }
    let mut failure = None;
    let found = bisect(
        |lam| match theta_at(lam) {
            Ok(t) => t,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lambda0,
        0.0,
        LAMBDA_TOL,
        200,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let found = found.ok_or(Error::BracketFailure { theta: t0 })?;
    let theta = theta_at(found.root)?;
    Ok(NegativeEigenvalue {
        lambda_star: found.root,
        theta,
        iterations: found.iterations,
    })
}

/// `θ⁺(0, λ)` at `count` evenly spaced points of `[λ₀, 0]`, computed in
/// parallel; the runs are independent.
pub fn theta_scan(p: &ProfileGrid, count: usize) -> Result<Vec<(f64, f64)>> {
    let (lambda0, _) = spectral_bounds(p)?;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let lam = lambda0 * (1.0 - i as f64 / (count - 1) as f64);
            let prob = PruferProblem::new(p, lam)?;
            Ok((lam, prufer_shoot(&prob)?))
        })
        .collect()
}

/// Outcome of the kernel check.
#[derive(Debug, Clone)]
pub struct KernelCheck {
    /// `max |(c - φ₀)φ₀' - G∗φ₀'|`.
    pub kernel_residual: f64,
    pub p0_sign_ok: bool,
    /// `max |p₀(x) + p₀(-x)|`.
    pub oddness_defect: f64,
    pub p0: LineField,
}

/// Checks that `φ₀'` spans the kernel and that `p₀ = G∗φ₀'` has a single
/// zero at the origin.
pub fn verify_kernel(p: &ProfileGrid) -> Result<KernelCheck> {
    require_zero_background(p)?;
    let c = p.params.c;
    let dphi = p.derivative_field();
    let p0 = dphi.helmholtz_inverse();
    let pv = p0.values();
    let kernel_residual = (0..pv.len())
        .map(|i| ((c - p.phi[i]) * p.phi_x[i] - pv[i]).abs())
        .fold(0.0, f64::max);
    let n = pv.len();
    let oddness_defect = (0..n).map(|i| (pv[i] + pv[n - 1 - i]).abs()).fold(0.0, f64::max);
    let x_eps = 10.0 * p.grid().spacing();
    let negative_right = p.x.iter().zip(pv).filter(|(x, _)| **x > x_eps).all(|(_, v)| *v < 0.0);
    let centered = pv[p.n / 2].abs() < 1e-12;
    let p0_sign_ok = negative_right && centered && oddness_defect < 1e-12;
    Ok(KernelCheck {
        kernel_residual,
        p0_sign_ok,
        oddness_defect,
        p0,
    })
}

/// The turning position: `A(x, λ) ≤ 0` for `|x| ≤ x̄` and `> 0` beyond.
pub fn xbar(prob: &PruferProblem<'_>) -> f64 {
    if prob.coefficient(0.0) >= 0.0 {
        return 0.0;
    }
    bisect(|x| prob.coefficient(x), 0.0, prob.truncation, 1e-13, 200)
        .map(|b| b.root)
        .unwrap_or(prob.truncation)
}

/// Dense symmetric discretization of `𝓛` on a periodic grid, used as an
/// independent check of the shooting results.
pub struct MatrixOracle {
    pub c: f64,
    pub grid: PeriodicGrid,
    /// Profile samples on the periodic grid.
    pub phi: Vec<f64>,
    pub matrix: Mat<f64>,
}

/// Summary written to `spectrum.json`.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct OracleSummary {
    pub n_negative: usize,
    pub closest_to_zero: f64,
}

impl MatrixOracle {
    /// Half-width `max(40, 30/μ)` and `n` periodic nodes.
    pub fn new(c: f64, n: usize) -> Result<Self> {
        let params = derive_constants(c, 0.0)?;
        let half_width = (30.0 / params.decay_rate()).max(40.0);
        let profile = build_profile(&params, half_width, n)?;
        Ok(Self::from_profile(&profile))
    }

    pub fn from_profile(profile: &ProfileGrid) -> Self {
        let c = profile.params.c;
        let grid = PeriodicGrid::new(profile.half_width, profile.n);
        let fourier = Fourier::new(grid);
        let n = grid.n;
        let symbol: Vec<_> = fourier
            .wavenumbers()
            .iter()
            .map(|k| rustfft::num_complex::Complex64::new(1.0 / (1.0 + k * k), 0.0))
            .collect();
        // first column of the circulant Helmholtz inverse
        let column = fourier.inverse(&symbol);
        let phi = profile.phi[..n].to_vec();
        let matrix = Mat::from_fn(n, n, |i, j| {
            let m = (i + n - j) % n;
            let conv = 0.5 * (column[m] + column[(n - m) % n]);
            if i == j {
                c - phi[i] - conv
            } else {
                -conv
            }
        });
        Self { c, grid, phi, matrix }
    }

    /// Eigenvalues in nondecreasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .self_adjoint_eigenvalues(Side::Lower)
            .expect("symmetric eigensolve failed")
    }

    /// Eigenvalues and the matching eigenvectors (columns).
    pub fn eigenpairs(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let evd = self
            .matrix
            .self_adjoint_eigen(Side::Lower)
            .expect("symmetric eigensolve failed");
        let n = self.grid.n;
        let s = evd.S().column_vector();
        let u = evd.U();
        let values = (0..n).map(|i| s[i]).collect();
        let vectors = (0..n)
            .map(|j| (0..n).map(|i| u[(i, j)]).collect())
            .collect();
        (values, vectors)
    }

    /// Negative count and the eigenvalue closest to zero, among those below
    /// the essential spectrum.
    pub fn summarize(&self, eigenvalues: &[f64]) -> OracleSummary {
        let ess_lo = self.c - 1.0;
        let below: Vec<f64> = eigenvalues.iter().copied().filter(|&l| l < ess_lo).collect();
        let n_negative = below.iter().filter(|&&l| l < -1e-6).count();
        let closest_to_zero = below
            .iter()
            .copied()
            .min_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(f64::NAN);
        OracleSummary { n_negative, closest_to_zero }
    }

    /// `⟨𝓛v, v⟩` with the grid quadrature weight.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        let n = self.grid.n;
        let h = self.grid.spacing();
        let mut acc = 0.0;
        for j in 0..n {
            let col = self.matrix.col(j);
            let mut lv = 0.0;
            for i in 0..n {
                lv += col[i] * v[i];
            }
            acc += lv * v[j];
        }
        h * acc
    }
}

/// `spectrum.json`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    pub c: f64,
    pub ess_lo: f64,
    pub ess_hi: f64,
    pub lambda0: f64,
    pub lambda_star: f64,
    pub theta_at_zero: f64,
    pub kernel_residual: f64,
    pub p0_sign_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_oracle: Option<OracleSummary>,
}

/// Full spectral picture at speed `c`; `oracle_n` adds the dense check.
pub fn spectral_report(c: f64, oracle_n: Option<usize>) -> Result<SpectralReport> {
    let params = derive_constants(c, 0.0)?;
    let profile = build_default_profile(&params)?;
    let (ess_lo, ess_hi) = essential_spectrum(c);
    let (lambda0, _) = spectral_bounds(&profile)?;
    let neg = find_negative_eigenvalue(&profile)?;
    let theta_at_zero = prufer_shoot(&PruferProblem::new(&profile, 0.0)?)?;
    let kernel = verify_kernel(&profile)?;
    let matrix_oracle = match oracle_n {
        Some(n) => {
            let oracle = MatrixOracle::new(c, n)?;
            Some(oracle.summarize(&oracle.eigenvalues()))
        }
        None => None,
    };
    Ok(SpectralReport {
        c,
        ess_lo,
        ess_hi,
        lambda0,
        lambda_star: neg.lambda_star,
        theta_at_zero,
        kernel_residual: kernel.kernel_residual,
        p0_sign_ok: kernel.p0_sign_ok,
        matrix_oracle,
    })
}

/// True when `θ⁺(0, ·)` crosses `-mπ/2` only for `m = 0` inside `(λ₀, 0)`.
pub fn only_expected_crossings(scan: &[(f64, f64)]) -> bool {
    scan.iter()
        .filter(|(l, _)| *l < 0.0)
        .all(|(_, t)| *t > -FRAC_PI_2 && *t < FRAC_PI_2)
}
