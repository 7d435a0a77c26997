//! Pseudospectral evolution of `u_t + u u_x + ∂ₓ(1 - ∂ₓ²)⁻¹u = 0` on a
//! periodic domain, and the orbital distance to the translates of a wave.
//!
//! Derivatives and the Helmholtz inverse are exact Fourier multipliers; the
//! product `u·u_x` is filtered with the 2/3 rule. Time stepping is classical
//! RK4.

use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals;
use crate::io::fmt_f64;
use crate::nonlocal::{translate_spectrum, Field, Fourier, PeriodicField, PeriodicGrid};
use crate::profile::{build_profile, derive_constants, WaveParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `e^{-x²}`
    Even,
    /// `x e^{-x²}`
    Odd,
    /// Seeded Gaussian noise restricted to `|ξ| ≤ 2`.
    Noise,
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Shape::Even),
            "odd" => Ok(Shape::Odd),
            "noise" => Ok(Shape::Noise),
            other => Err(Error::InvalidConfig(format!(
                "unknown perturbation shape {other:?} (expected even, odd or noise)"
            ))),
        }
    }
}

/// Run configuration. Field names match the keys of the TOML config file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub c: f64,
    pub k: f64,
    pub rho: f64,
    pub shape: Shape,
    /// Half-width; `max(100, 40/μ)` when absent.
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    pub n: usize,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    pub stride: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            c: 1.2,
            k: 0.0,
            rho: 0.0,
            shape: Shape::Even,
            half_width: None,
            n: 4096,
            dt: 0.005,
            t_end: 100.0,
            stride: 0.5,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn params(&self) -> Result<WaveParams> {
        derive_constants(self.c, self.k)
    }

    pub fn resolved_half_width(&self) -> Result<f64> {
        let mu = self.params()?.decay_rate();
        Ok(self.half_width.unwrap_or((40.0 / mu).max(100.0)))
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        Ok(PeriodicGrid::new(self.resolved_half_width()?, self.n))
    }

    /// Time steps per recording interval.
    pub fn steps_per_record(&self) -> Result<usize> {
        let r = self.stride / self.dt;
        if !(r >= 1.0) || (r - r.round()).abs() > 1e-9 * r {
            return Err(Error::InvalidConfig(format!(
                "stride {} is not a positive multiple of dt {}",
                self.stride, self.dt
            )));
        }
        Ok(r.round() as usize)
    }

    /// Checks everything that does not need the initial state.
    pub fn validate(&self) -> Result<()> {
        let params = self.params()?;
        let invalid = |m: String| Err(Error::InvalidConfig(m));
        if self.n < 16 || !self.n.is_power_of_two() {
            return invalid(format!("n = {} must be a power of two (at least 16)", self.n));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return invalid(format!("dt = {} must be positive", self.dt));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return invalid(format!("T = {} must be nonnegative", self.t_end));
        }
        if !(self.rho >= 0.0) || !self.rho.is_finite() {
            return invalid(format!("rho = {} must be nonnegative", self.rho));
        }
        self.steps_per_record()?;
        let l = self.resolved_half_width()?;
        let required = 30.0 / params.decay_rate();
        if !(l >= required) {
            return invalid(format!("L = {l} is below 30/mu = {required}"));
        }
        Ok(())
    }

    /// `dt ≤ 0.5·dx/max|u₀|`.
    pub fn check_cfl(&self, u0: &PeriodicField) -> Result<()> {
        let umax = u0.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let bound = 0.5 * u0.grid().spacing() / umax;
        if self.dt > bound {
            return Err(Error::InvalidConfig(format!(
                "dt = {} violates the CFL bound {bound}",
                self.dt
            )));
        }
        Ok(())
    }
}

/// Spectral right-hand side with cached transforms and scratch space.
pub struct Evolver {
    fourier: Fourier,
    /// `iξ`, Nyquist zeroed.
    ik: Vec<Complex64>,
    /// `iξ/(1 + ξ²)`, Nyquist zeroed.
    dispersion: Vec<Complex64>,
    keep: Vec<bool>,
    uh: Vec<Complex64>,
    work: Vec<Complex64>,
    t: f64,
}

impl Evolver {
    pub fn new(grid: PeriodicGrid) -> Self {
        let fourier = Fourier::new(grid);
        let n = grid.n;
        let xi = fourier.wavenumbers();
        let ik: Vec<Complex64> = (0..n)
            .map(|j| {
                if j == n / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, xi[j])
                }
            })
            .collect();
        let dispersion = ik
            .iter()
            .zip(xi)
            .map(|(z, k)| z / (1.0 + k * k))
            .collect();
        let keep = (0..n)
            .map(|j| {
                let m = if j <= n / 2 { j } else { n - j };
                3 * m < n
            })
            .collect();
        Self {
            fourier,
            ik,
            dispersion,
            keep,
            uh: vec![Complex64::new(0.0, 0.0); n],
            work: vec![Complex64::new(0.0, 0.0); n],
            t: 0.0,
        }
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.fourier.grid()
    }

    /// `-u·u_x - ∂ₓG∗u` written into `out`.
    pub fn rhs_into(&mut self, u: &[f64], out: &mut [f64]) -> Result<()> {
        for (z, &v) in self.uh.iter_mut().zip(u) {
            *z = Complex64::new(v, 0.0);
        }
        self.fourier.forward_in_place(&mut self.uh);
        for ((w, z), ik) in self.work.iter_mut().zip(&self.uh).zip(&self.ik) {
            *w = z * ik;
        }
        self.fourier.inverse_in_place(&mut self.work);
        for (w, &v) in self.work.iter_mut().zip(u) {
            *w = Complex64::new(v * w.re, 0.0);
        }
        self.fourier.forward_in_place(&mut self.work);
        for j in 0..self.work.len() {
            let nl = if self.keep[j] { self.work[j] } else { Complex64::new(0.0, 0.0) };
            self.work[j] = -nl - self.dispersion[j] * self.uh[j];
        }
        self.fourier.inverse_in_place(&mut self.work);
        for (o, w) in out.iter_mut().zip(&self.work) {
            *o = w.re;
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: self.t });
        }
        Ok(())
    }

    pub fn rhs(&mut self, u: &PeriodicField) -> Result<PeriodicField> {
        let mut out = vec![0.0; u.values().len()];
        self.rhs_into(u.values(), &mut out)?;
        Ok(u.with_values(out))
    }

    /// One RK4 step of size `dt` (negative steps go backwards).
    pub fn step(&mut self, state: &mut SimState, dt: f64) -> Result<()> {
        self.t = state.t;
        let u = state.u.values();
        let n = u.len();
        let mut k = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut stage = vec![0.0; n];
        self.rhs_into(u, &mut k[0])?;
        for (s, (a, b)) in stage.iter_mut().zip(u.iter().zip(&k[0])) {
            *s = a + 0.5 * dt * b;
        }
        self.rhs_into(&stage, &mut k[1])?;
        for (s, (a, b)) in stage.iter_mut().zip(u.iter().zip(&k[1])) {
            *s = a + 0.5 * dt * b;
        }
        self.rhs_into(&stage, &mut k[2])?;
        for (s, (a, b)) in stage.iter_mut().zip(u.iter().zip(&k[2])) {
            *s = a + dt * b;
        }
        self.rhs_into(&stage, &mut k[3])?;
        let next: Vec<f64> = (0..n)
            .map(|i| u[i] + dt / 6.0 * (k[0][i] + 2.0 * k[1][i] + 2.0 * k[2][i] + k[3][i]))
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t: state.t + dt });
        }
        state.u = state.u.with_values(next);
        state.t += dt;
        Ok(())
    }

    /// Advances `steps` steps of size `dt`.
    pub fn advance(&mut self, state: &mut SimState, dt: f64, steps: usize) -> Result<()> {
        for _ in 0..steps {
            self.step(state, dt)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SimState {
    pub t: f64,
    pub u: PeriodicField,
    pub e0: f64,
    pub q0: f64,
}

impl SimState {
    pub fn new(u: PeriodicField) -> Self {
        let e0 = functionals::energy_e(&u);
        let q0 = functionals::charge_q(&u);
        Self { t: 0.0, u, e0, q0 }
    }
}

/// H¹ distance from a field to the translates of a fixed profile.
pub struct OrbitalMeter {
    grid: PeriodicGrid,
    fourier: Fourier,
    /// `1 + ξ²`
    weight: Vec<f64>,
    profile_hat: Vec<Complex64>,
    profile_norm2: f64,
}

impl OrbitalMeter {
    pub fn new(profile: &PeriodicField) -> Self {
        let grid = profile.grid();
        let fourier = Fourier::new(grid);
        let weight: Vec<f64> = fourier.wavenumbers().iter().map(|k| 1.0 + k * k).collect();
        let profile_hat = profile.spectrum().to_vec();
        let scale = grid.spacing() / grid.n as f64;
        let profile_norm2 = scale * profile_hat.iter().zip(&weight).map(|(z, w)| w * z.norm_sqr()).sum::<f64>();
        Self {
            grid,
            fourier,
            weight,
            profile_hat,
            profile_norm2,
        }
    }

    /// `(C(s), C'(s), C''(s))` for `C(s) = ⟨u, φ(· - s)⟩_{H¹}`.
    fn correlation(&self, cross: &[Complex64], s: f64) -> (f64, f64, f64) {
        let n = self.grid.n;
        let scale = self.grid.spacing() / n as f64;
        let xi = self.fourier.wavenumbers();
        let (mut c0, mut c1, mut c2) = (0.0, 0.0, 0.0);
        for j in 0..n {
            let k = xi[j];
            let z = cross[j];
            if j == n / 2 {
                let (sn, cs) = (k * s).sin_cos();
                c0 += z.re * cs;
                c1 -= z.re * k * sn;
                c2 -= z.re * k * k * cs;
            } else {
                let e = z * Complex64::from_polar(1.0, k * s);
                c0 += e.re;
                c1 -= k * e.im;
                c2 -= k * k * e.re;
            }
        }
        (scale * c0, scale * c1, scale * c2)
    }

    /// Minimizing shift, wrapped to `[-L, L)`, and the distance there.
    pub fn distance(&self, u: &PeriodicField) -> Result<(f64, f64)> {
        if u.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        let n = self.grid.n;
        let h = self.grid.spacing();
        let uh = u.spectrum();
        // weighted cross spectrum; its inverse transform samples C on the grid
        let cross: Vec<Complex64> = (0..n)
            .map(|j| self.weight[j] * uh[j] * self.profile_hat[j].conj())
            .collect();
        let samples: Vec<f64> = self.fourier.inverse(&cross).iter().map(|v| v * h).collect();
        let m = (0..n).max_by(|&a, &b| samples[a].total_cmp(&samples[b])).unwrap_or(0);
        let (a, b, c) = (samples[(m + n - 1) % n], samples[(m + 1) % n], samples[m]);
        let denom = a - 2.0 * c + b;
        let frac = if denom < 0.0 { 0.5 * (a - b) / denom } else { 0.0 };
        let mut s = (m as f64 + frac) * h;
        // Newton on C'(s) = 0, kept only while C increases
        let mut best = self.correlation(&cross, s).0;
        for _ in 0..8 {
            let (_, d1, d2) = self.correlation(&cross, s);
            if !(d2 < 0.0) {
                break;
            }
            let trial = s - d1 / d2;
            let value = self.correlation(&cross, trial).0;
            if value < best {
                break;
            }
            let done = (trial - s).abs() < 1e-14 * self.grid.half_width;
            s = trial;
            best = value;
            if done {
                break;
            }
        }
        let l = self.grid.half_width;
        let s = (s + l).rem_euclid(2.0 * l) - l;
        Ok((self.distance_at(u, s), s))
    }

    /// `‖u - φ(· - s)‖_{H¹}` from the spectral difference.
    pub fn distance_at(&self, u: &PeriodicField, s: f64) -> f64 {
        let shifted = translate_spectrum(&self.profile_hat, self.fourier.wavenumbers(), s);
        let scale = self.grid.spacing() / self.grid.n as f64;
        let sum: f64 = u
            .spectrum()
            .iter()
            .zip(&shifted)
            .zip(&self.weight)
            .map(|((a, b), w)| w * (a - b).norm_sqr())
            .sum();
        (scale * sum).sqrt()
    }

    pub fn profile_norm(&self) -> f64 {
        self.profile_norm2.sqrt()
    }
}

/// `inf_s ‖u - φ(· - s)‖_{H¹}` and its minimizer.
pub fn orbital_distance(u: &PeriodicField, profile: &PeriodicField) -> Result<(f64, f64)> {
    OrbitalMeter::new(profile).distance(u)
}

/// Perturbation of the given shape scaled to H¹ norm `size`.
pub fn perturbation(grid: PeriodicGrid, shape: Shape, seed: u64, size: f64) -> PeriodicField {
    let raw = match shape {
        Shape::Even => PeriodicField::from_fn(grid, |x| (-x * x).exp()),
        Shape::Odd => PeriodicField::from_fn(grid, |x| x * (-x * x).exp()),
        Shape::Noise => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let white: Vec<f64> = (0..grid.n).map(|_| rng.sample(StandardNormal)).collect();
            let fourier = Fourier::new(grid);
            let coeffs: Vec<Complex64> = fourier
                .forward(&white)
                .into_iter()
                .zip(fourier.wavenumbers())
                .map(|(z, k)| if k.abs() <= 2.0 { z } else { Complex64::new(0.0, 0.0) })
                .collect();
            PeriodicField::with_spectrum(grid, &fourier, coeffs)
        }
    };
    let norm = raw.h1_norm();
    let scale = if norm > 0.0 { size / norm } else { 0.0 };
    raw.with_values(raw.values().iter().map(|v| v * scale).collect())
}

/// `u(x) ↦ u(x - s) + k`, the image of a solution at time `t` under the
/// background symmetry when `s = kt`.
pub fn lift(u: &PeriodicField, k: f64, s: f64) -> PeriodicField {
    let shifted = if s == 0.0 { u.clone() } else { u.translate(s) };
    shifted.with_values(shifted.values().iter().map(|v| v + k).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRow {
    pub t: f64,
    pub dist: f64,
    pub shift: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Q")]
    pub q: f64,
    #[serde(rename = "dE_rel")]
    pub de_rel: f64,
    #[serde(rename = "dQ_rel")]
    pub dq_rel: f64,
}

#[derive(Debug, Clone)]
pub struct OrbitalTrace {
    pub rows: Vec<TraceRow>,
    /// Time at which the solution stopped being finite.
    pub blowup: Option<f64>,
    /// `‖φ - k‖_{H¹}` of the reference wave.
    pub profile_norm: f64,
}

impl OrbitalTrace {
    pub fn initial_distance(&self) -> f64 {
        self.rows.first().map_or(f64::NAN, |r| r.dist)
    }

    pub fn max_distance(&self) -> f64 {
        self.rows.iter().map(|r| r.dist).fold(0.0, f64::max)
    }

    pub fn max_drift(&self) -> (f64, f64) {
        self.rows
            .iter()
            .fold((0.0f64, 0.0f64), |(e, q), r| (e.max(r.de_rel.abs()), q.max(r.dq_rel.abs())))
    }

    /// `trace.csv`; a blow-up adds a final row with only `t` finite.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("t,dist,shift,E,Q,dE_rel,dQ_rel\n");
        for r in &self.rows {
            let cols = [r.t, r.dist, r.shift, r.e, r.q, r.de_rel, r.dq_rel];
            out.push_str(&cols.map(fmt_f64).join(","));
            out.push('\n');
        }
        if let Some(t) = self.blowup {
            out.push_str(&format!("{},NaN,NaN,NaN,NaN,NaN,NaN\n", fmt_f64(t)));
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Reference wave of the configuration on its periodic grid.
pub fn reference_wave(config: &SimConfig) -> Result<PeriodicField> {
    let grid = config.grid()?;
    let profile = build_profile(&config.params()?, grid.half_width, grid.n)?;
    Ok(profile.periodic())
}

/// Initial state `φ + ρ‖φ - k‖_{H¹}·b` with `b` the unit-norm shape.
pub fn initial_state(config: &SimConfig, wave: &PeriodicField) -> PeriodicField {
    let base = wave.with_values(wave.values().iter().map(|v| v - config.k).collect());
    let size = config.rho * base.h1_norm();
    let bump = perturbation(wave.grid(), config.shape, config.seed, size);
    wave.with_values(wave.values().iter().zip(bump.values()).map(|(a, b)| a + b).collect())
}

fn trace_row(meter: &OrbitalMeter, state: &SimState, k: f64) -> Result<TraceRow> {
    let (dist, shift) = if k == 0.0 {
        meter.distance(&state.u)?
    } else {
        // distances are measured for the disturbance of the background
        let base = state.u.with_values(state.u.values().iter().map(|v| v - k).collect());
        meter.distance(&base)?
    };
    let e = functionals::energy_e(&state.u);
    let q = functionals::charge_q(&state.u);
    Ok(TraceRow {
        t: state.t,
        dist,
        shift,
        e,
        q,
        de_rel: (e - state.e0) / state.e0.abs(),
        dq_rel: (q - state.q0) / state.q0,
    })
}

/// Evolves the configured initial state, recording every `stride`.
pub fn run(config: &SimConfig) -> Result<OrbitalTrace> {
    config.validate()?;
    let wave = reference_wave(config)?;
    let u0 = initial_state(config, &wave);
    config.check_cfl(&u0)?;
    run_from(config, &wave, u0)
}

/// Evolves `u0` with the configured step and horizon, measuring distances
/// to the translates of `wave`. A non-finite state ends the run and is
/// recorded as a blow-up.
pub fn run_from(config: &SimConfig, wave: &PeriodicField, u0: PeriodicField) -> Result<OrbitalTrace> {
    if u0.grid() != wave.grid() {
        return Err(Error::GridMismatch);
    }
    let background = wave.with_values(wave.values().iter().map(|v| v - config.k).collect());
    let meter = OrbitalMeter::new(&background);
    let mut evolver = Evolver::new(wave.grid());
    let mut state = SimState::new(u0);
    let per_record = config.steps_per_record()?;
    let records = (config.t_end / config.stride + 1e-9).floor() as usize;
    let mut rows = vec![trace_row(&meter, &state, config.k)?];
    let mut blowup = None;
    for r in 1..=records {
        match evolver.advance(&mut state, config.dt, per_record) {
            Ok(()) => {
                // fixes accumulated rounding in t
                state.t = r as f64 * config.stride;
                rows.push(trace_row(&meter, &state, config.k)?);
            }
            Err(Error::NonFinite { t }) => {
                blowup = Some(t);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(OrbitalTrace {
        rows,
        blowup,
        profile_norm: meter.profile_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> PeriodicGrid {
        PeriodicGrid::new(20.0, 256)
    }

    #[test]
    fn constants_are_steady() {
        let mut ev = Evolver::new(small_grid());
        let u = PeriodicField::from_fn(small_grid(), |_| 0.7);
        let r = ev.rhs(&u).unwrap();
        assert!(r.values().iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn zero_stays_zero() {
        let mut ev = Evolver::new(small_grid());
        let mut s = SimState::new(PeriodicField::from_fn(small_grid(), |_| 0.0));
        ev.advance(&mut s, 0.01, 10).unwrap();
        assert!(s.u.values().iter().all(|&v| v == 0.0));
        assert!((s.t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn non_finite_is_reported() {
        let mut ev = Evolver::new(small_grid());
        let mut v = vec![0.0; 256];
        v[3] = f64::NAN;
        let u = PeriodicField::new(small_grid(), v);
        assert!(matches!(ev.rhs(&u), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn config_defaults_and_parsing() {
        let c = SimConfig::from_toml("c = 1.25\nrho = 0.01\nshape = \"odd\"\nT = 10.0\n").unwrap();
        assert_eq!(c.c, 1.25);
        assert_eq!(c.shape, Shape::Odd);
        assert_eq!(c.n, 4096);
        assert_eq!(c.dt, 0.005);
        assert!(c.validate().is_ok());
        assert!(SimConfig::from_toml("speed = 1.2").is_err());
        let d = SimConfig::default();
        assert_eq!(d.resolved_half_width().unwrap(), 100.0);
    }

    #[test]
    fn config_validation() {
        let bad_n = SimConfig { n: 1000, ..SimConfig::default() };
        assert!(bad_n.validate().is_err());
        let short = SimConfig { half_width: Some(20.0), ..SimConfig::default() };
        assert!(short.validate().is_err());
        let stride = SimConfig { stride: 0.0123, ..SimConfig::default() };
        assert!(stride.validate().is_err());
        let slow = SimConfig { c: 0.9, ..SimConfig::default() };
        assert!(slow.validate().is_err());
        let big_dt = SimConfig { dt: 0.5, stride: 0.5, ..SimConfig::default() };
        let wave = reference_wave(&big_dt).unwrap();
        assert!(big_dt.check_cfl(&wave).is_err());
    }

    #[test]
    fn perturbation_norms() {
        let grid = PeriodicGrid::new(100.0, 1024);
        for shape in [Shape::Even, Shape::Odd, Shape::Noise] {
            let b = perturbation(grid, shape, 7, 0.3);
            assert!((b.h1_norm() - 0.3).abs() < 1e-12);
        }
        let a = perturbation(grid, Shape::Noise, 7, 1.0);
        let b = perturbation(grid, Shape::Noise, 7, 1.0);
        let c = perturbation(grid, Shape::Noise, 8, 1.0);
        assert_eq!(a.values(), b.values());
        assert_ne!(a.values(), c.values());
        let odd = perturbation(grid, Shape::Odd, 0, 1.0);
        assert!(odd.values()[512].abs() < 1e-15);
    }

    #[test]
    fn distance_to_zero_is_the_profile_norm() {
        let p = PeriodicField::from_fn(small_grid(), |x| 1.0 / x.cosh().powi(2));
        let z = p.with_values(vec![0.0; 256]);
        let (d, _) = orbital_distance(&z, &p).unwrap();
        assert!((d - p.h1_norm()).abs() < 1e-12);
    }

    #[test]
    fn exact_translate_is_recovered() {
        let p = PeriodicField::from_fn(small_grid(), |x| 1.0 / x.cosh().powi(2));
        for s in [3.7, -5.123, 0.01] {
            let u = p.translate(s);
            let (d, shift) = orbital_distance(&u, &p).unwrap();
            assert!(d < 1e-10, "{d}");
            assert!((shift - s).abs() < small_grid().spacing() / 100.0, "{shift}");
        }
    }

    #[test]
    fn lift_reverses() {
        let p = PeriodicField::from_fn(small_grid(), |x| (-x * x).exp());
        let l = lift(&lift(&p, 0.3, 1.5), -0.3, -1.5);
        for (a, b) in l.values().iter().zip(p.values()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
