//! The Helmholtz inverse `(1 - ∂ₓ²)⁻¹` and Sobolev pairings on the two grids
//! used throughout the crate.
//!
//! On the line the inverse is convolution with `G(x) = e^{-|x|}/2`. The
//! convolution is evaluated by two exponential sweeps; inside each cell the
//! field is replaced by its four-point cubic interpolant and the product with
//! the exponential is integrated in closed form, so the only error is the
//! interpolation error of the field. A constant background is carried
//! analytically since `G * 1 = 1`.
//!
//! On the periodic grid the inverse is the Fourier multiplier `1/(1 + ξ²)`.

use std::sync::{Arc, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform symmetric grid on `[-L, L]` with `intervals + 1` nodes, both
/// endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid {
    pub half_width: f64,
    pub intervals: usize,
}

impl LineGrid {
    pub fn new(half_width: f64, intervals: usize) -> Self {
        Self { half_width, intervals }
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.intervals as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        // exact zero and exact mirror symmetry for even interval counts
        let m = self.intervals as f64 / 2.0;
        (i as f64 - m) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    /// Index of the node at `x = 0`; interval counts are always even.
    pub fn center(&self) -> usize {
        self.intervals / 2
    }
}

/// Uniform periodic grid with `n` nodes on `[-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicGrid {
    pub half_width: f64,
    pub n: usize,
}

impl PeriodicGrid {
    pub fn new(half_width: f64, n: usize) -> Self {
        Self { half_width, n }
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.half_width + i as f64 * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// Discrete wavenumbers `2π j / (2L)` in FFT order; the Nyquist entry is
    /// positive.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n;
        let base = std::f64::consts::PI / self.half_width;
        (0..n)
            .map(|j| {
                if j <= n / 2 {
                    base * j as f64
                } else {
                    base * (j as f64 - n as f64)
                }
            })
            .collect()
    }
}

/// Cached forward/inverse transforms for one periodic grid.
#[derive(Clone)]
pub struct Fourier {
    grid: PeriodicGrid,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    xi: Vec<f64>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("grid", &self.grid).finish()
    }
}

impl Fourier {
    pub fn new(grid: PeriodicGrid) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            forward: planner.plan_fft_forward(grid.n),
            inverse: planner.plan_fft_inverse(grid.n),
            xi: grid.wavenumbers(),
        }
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn wavenumbers(&self) -> &[f64] {
        &self.xi
    }

    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse transform, normalized, real part only.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.inverse_in_place(&mut buf);
        buf.iter().map(|z| z.re).collect()
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / self.grid.n as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }
}

/// Operations shared by line and periodic fields.
pub trait Field: Sized + Clone {
    fn values(&self) -> &[f64];

    /// A field on the same grid with different samples.
    fn with_values(&self, values: Vec<f64>) -> Self;

    fn same_grid(&self, other: &Self) -> bool;

    /// Quadrature of nodal data over the domain.
    fn integrate(&self, data: &[f64]) -> f64;

    fn helmholtz_inverse(&self) -> Self;

    fn h1_inner(&self, other: &Self) -> Result<f64>;

    fn l2_inner(&self, other: &Self) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let prod: Vec<f64> = self
            .values()
            .iter()
            .zip(other.values())
            .map(|(a, b)| a * b)
            .collect();
        Ok(self.integrate(&prod))
    }

    fn h1_norm(&self) -> f64 {
        self.h1_inner(self).map(|v| v.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineField {
    grid: LineGrid,
    values: Vec<f64>,
}

impl LineField {
    pub fn new(grid: LineGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match grid");
        Self { grid, values }
    }

    pub fn from_fn(grid: LineGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.len()).map(|i| f(grid.node(i))).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> LineGrid {
        self.grid
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Second-order centered differences, one-sided at the ends.
    pub fn derivative(&self) -> Vec<f64> {
        let f = &self.values;
        let n = f.len();
        let h = self.grid.spacing();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        }
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        d
    }
}

impl Field for LineField {
    fn values(&self) -> &[f64] {
        &self.values
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        LineField::new(self.grid, values)
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.grid == other.grid
    }

    fn integrate(&self, data: &[f64]) -> f64 {
        trapezoid(data, self.grid.spacing())
    }

    fn helmholtz_inverse(&self) -> Self {
        self.with_values(helmholtz_line(&self.values, self.grid.spacing()))
    }

    fn h1_inner(&self, other: &Self) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let du = self.derivative();
        let dv = other.derivative();
        let data: Vec<f64> = (0..self.values.len())
            .map(|i| self.values[i] * other.values[i] + du[i] * dv[i])
            .collect();
        Ok(self.integrate(&data))
    }
}

/// Periodic samples with a lazily computed transform.
#[derive(Debug, Clone)]
pub struct PeriodicField {
    grid: PeriodicGrid,
    values: Vec<f64>,
    spectrum: OnceLock<Vec<Complex64>>,
}

impl PartialEq for PeriodicField {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values == other.values
    }
}

impl PeriodicField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.n, "sample count must match grid");
        Self {
            grid,
            values,
            spectrum: OnceLock::new(),
        }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::new(grid, (0..grid.n).map(|i| f(grid.node(i))).collect())
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Transform coefficients, computed once per field.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| Fourier::new(self.grid).forward(&self.values))
    }

    pub fn with_spectrum(grid: PeriodicGrid, fourier: &Fourier, coeffs: Vec<Complex64>) -> Self {
        let values = fourier.inverse(&coeffs);
        let spectrum = OnceLock::new();
        let _ = spectrum.set(coeffs);
        Self { grid, values, spectrum }
    }

    /// Spectral derivative (Nyquist mode dropped).
    pub fn derivative(&self) -> Self {
        let fourier = Fourier::new(self.grid);
        let xi = fourier.wavenumbers();
        let n = self.grid.n;
        let coeffs: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(j, z)| {
                if j == n / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z * Complex64::new(0.0, xi[j])
                }
            })
            .collect();
        Self::with_spectrum(self.grid, &fourier, coeffs)
    }

    /// Translation `f(x) ↦ f(x - s)` by Fourier phase shift.
    pub fn translate(&self, s: f64) -> Self {
        let fourier = Fourier::new(self.grid);
        let coeffs = translate_spectrum(self.spectrum(), fourier.wavenumbers(), s);
        Self::with_spectrum(self.grid, &fourier, coeffs)
    }
}

/// Multiplies `û(ξ)` by `e^{-iξs}`; the Nyquist coefficient gets the real
/// part of the phase so the result stays real.
pub fn translate_spectrum(coeffs: &[Complex64], xi: &[f64], s: f64) -> Vec<Complex64> {
    let n = coeffs.len();
    coeffs
        .iter()
        .zip(xi)
        .enumerate()
        .map(|(j, (z, &k))| {
            if j == n / 2 {
                z * (k * s).cos()
            } else {
                z * Complex64::from_polar(1.0, -k * s)
            }
        })
        .collect()
}

impl Field for PeriodicField {
    fn values(&self) -> &[f64] {
        &self.values
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        PeriodicField::new(self.grid, values)
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.grid == other.grid
    }

    fn integrate(&self, data: &[f64]) -> f64 {
        self.grid.spacing() * data.iter().sum::<f64>()
    }

    fn helmholtz_inverse(&self) -> Self {
        let fourier = Fourier::new(self.grid);
        let coeffs: Vec<Complex64> = self
            .spectrum()
            .iter()
            .zip(fourier.wavenumbers())
            .map(|(z, k)| z / (1.0 + k * k))
            .collect();
        Self::with_spectrum(self.grid, &fourier, coeffs)
    }

    fn h1_inner(&self, other: &Self) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let xi = self.grid.wavenumbers();
        let n = self.grid.n as f64;
        let sum: f64 = self
            .spectrum()
            .iter()
            .zip(other.spectrum())
            .zip(&xi)
            .map(|((a, b), k)| (1.0 + k * k) * (a * b.conj()).re)
            .sum();
        Ok(self.grid.spacing() * sum / n)
    }
}

/// Convenience wrapper for the line-grid operator.
pub fn helmholtz_inverse_line(f: &LineField) -> LineField {
    f.helmholtz_inverse()
}

/// Convenience wrapper for the periodic operator.
pub fn helmholtz_inverse_periodic(f: &PeriodicField) -> PeriodicField {
    f.helmholtz_inverse()
}

pub fn h1_inner<F: Field>(u: &F, v: &F) -> Result<f64> {
    u.h1_inner(v)
}

pub fn trapezoid(data: &[f64], h: f64) -> f64 {
    match data.len() {
        0 => 0.0,
        1 => 0.0,
        n => h * (data.iter().sum::<f64>() - 0.5 * (data[0] + data[n - 1])),
    }
}

/// `∫₀¹ e^{-h(1-u)} u^m du` for `m = 0..=3`.
fn exp_moments(h: f64) -> [f64; 4] {
    let mut out = [0.0; 4];
    if h < 2.0 {
        // Σ_j (-h)^j m! / (m + j + 1)!
        for (m, slot) in out.iter_mut().enumerate() {
            let mut term = 1.0 / (m as f64 + 1.0);
            let mut sum = term;
            let mut j = 0.0;
            while term.abs() > 1e-18 * sum.abs() {
                j += 1.0;
                term *= -h / (m as f64 + j + 1.0);
                sum += term;
            }
            *slot = sum;
        }
    } else {
        out[0] = (1.0 - (-h).exp()) / h;
        for m in 1..4 {
            out[m] = (1.0 - m as f64 * out[m - 1]) / h;
        }
    }
    out
}

/// Weights of nodes `i-1, i, i+1, i+2` in `∫_{x_i}^{x_{i+1}} e^{-(x_{i+1}-s)} f(s) ds`
/// when `f` is replaced by its cubic interpolant through those nodes.
pub(crate) fn cell_weights(h: f64) -> [f64; 4] {
    let m = exp_moments(h);
    // Lagrange basis on nodes u = -1, 0, 1, 2 in monomial form (u^0..u^3)
    let basis: [[f64; 4]; 4] = [
        [0.0, -2.0 / 6.0, 3.0 / 6.0, -1.0 / 6.0],
        [1.0, -0.5, -1.0, 0.5],
        [0.0, 1.0, 0.5, -0.5],
        [0.0, -1.0 / 6.0, 0.0, 1.0 / 6.0],
    ];
    let mut w = [0.0; 4];
    for (j, b) in basis.iter().enumerate() {
        w[j] = h * (0..4).map(|p| b[p] * m[p]).sum::<f64>();
    }
    w
}

/// One sweep `I(x_{i+1}) = e^{-h} I(x_i) + ∫_{x_i}^{x_{i+1}} e^{-(x_{i+1}-s)} f`.
fn exp_sweep(g: &[f64], h: f64, w: &[f64; 4], decay: f64) -> Vec<f64> {
    let n = g.len();
    let at = |i: isize| -> f64 {
        if i < 0 || i as usize >= n {
            0.0
        } else {
            g[i as usize]
        }
    };
    let _ = h;
    let mut out = vec![0.0; n];
    for i in 0..n - 1 {
        let ii = i as isize;
        let cell = w[0] * at(ii - 1) + w[1] * at(ii) + w[2] * at(ii + 1) + w[3] * at(ii + 2);
        out[i + 1] = decay * out[i] + cell;
    }
    out
}

/// `G * f` for nodal samples on a uniform grid whose tails are flat.
pub(crate) fn helmholtz_line(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    if n < 2 {
        return f.to_vec();
    }
    let background = 0.5 * (f[0] + f[n - 1]);
    let g: Vec<f64> = f.iter().map(|v| v - background).collect();
    let w = cell_weights(h);
    let decay = (-h).exp();
    let left = exp_sweep(&g, h, &w, decay);
    let rev: Vec<f64> = g.iter().rev().copied().collect();
    let right = exp_sweep(&rev, h, &w, decay);
    (0..n)
        .map(|i| background + 0.5 * (left[i] + right[n - 1 - i]))
        .collect()
}
