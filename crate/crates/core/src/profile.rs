//! Smooth solitary-wave profiles from the traveling-wave reduction.
//!
//! A wave of speed `c` on background `k` satisfies
//!
//! ```text
//! ((φ - c)²)'' = (φ - c)² + 2φ + α,        2φ'² + F(φ) = α,
//! F(φ) = -(φ - c)²/2 + (2φ²(3c - 2φ)/3 + β) / (φ - c)²,
//! ```
//!
//! with `α`, `β` fixed by requiring `φ → k` at infinity. Solitary waves exist
//! iff `k ∈ (c - 4/3, c - 1)`.
//!
//! The profile is built outward from the crest. Near the crest the regular
//! second-order form in `w = (φ - c)²` is integrated; once the wave has lost
//! half of its amplitude the integration switches to the factored first-order
//! form `(ln(φ - k))' = -√(R(φ)/12) / (c - φ)`, which contracts toward the
//! saddle and therefore follows the homoclinic orbit all the way down into the
//! tail. Here `R` is the quadratic cofactor in
//! `6(φ - c)²(α - F(φ)) = (φ - k)² R(φ)`.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nonlocal::{LineField, LineGrid, PeriodicField, PeriodicGrid};
use crate::ode::Dopri5;
use crate::roots::bisect;

pub const TAIL_TOL: f64 = 1e-12;
pub const SYM_TOL: f64 = 1e-12;
pub const ODE_RTOL: f64 = 1e-12;

/// Smallest interval count accepted by [`build_profile`].
pub const MIN_INTERVALS: usize = 512;

/// Speed, background and the two integration constants of the reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParams {
    pub c: f64,
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl WaveParams {
    /// Admissible background window `(c - 4/3, c - 1)`.
    pub fn background_window(c: f64) -> (f64, f64) {
        (c - 4.0 / 3.0, c - 1.0)
    }

    /// Zero-background wave of speed `c`.
    pub fn zero_background(c: f64) -> Result<Self> {
        derive_constants(c, 0.0)
    }

    /// Speed of the equivalent zero-background wave.
    pub fn effective_speed(&self) -> f64 {
        self.c - self.k
    }

    /// Exponential decay rate of `φ - k`, from linearizing the steady
    /// equation about the background: `√((c - k - 1)/(c - k))`.
    pub fn decay_rate(&self) -> f64 {
        let ce = self.effective_speed();
        ((ce - 1.0) / ce).sqrt()
    }

    /// `α - F(φ)` in factored form; exact zero at the background.
    pub fn kinetic(&self, phi: f64) -> f64 {
        let d = phi - self.k;
        d * d * self.crest_quadratic(phi) / (6.0 * (self.c - phi).powi(2))
    }

    /// The cofactor `R(φ)` of the double root at the background. Its smaller
    /// root is the crest height.
    pub fn crest_quadratic(&self, phi: f64) -> f64 {
        let (c, k) = (self.c, self.k);
        3.0 * phi * phi - (12.0 * c - 6.0 * k - 8.0) * phi + 12.0 * c * c - 12.0 * k * c
            + 3.0 * k * k
            - 12.0 * c
            + 4.0 * k
    }

    /// `M(φ) = -3(c-φ)⁴ - 3φ(2c-φ)² - φ³`; critical points of `F` solve `M = 6β`.
    pub fn critical_map(&self, phi: f64) -> f64 {
        let c = self.c;
        -3.0 * (c - phi).powi(4) - 3.0 * phi * (2.0 * c - phi).powi(2) - phi.powi(3)
    }

    /// `β` window `(-2c³/3, 1/6 - 2c³/3)` for which two critical points exist.
    pub fn beta_window(c: f64) -> (f64, f64) {
        let lo = -2.0 * c.powi(3) / 3.0;
        (lo, lo + 1.0 / 6.0)
    }
}

/// `α`, `β` from the far-field limit; rejects backgrounds outside the
/// window where a homoclinic orbit exists.
pub fn derive_constants(c: f64, k: f64) -> Result<WaveParams> {
    let (lo, hi) = WaveParams::background_window(c);
    // k = 0 with c outside (1, 4/3) lands here as well
    if !(c.is_finite() && k.is_finite() && k > lo && k < hi) {
        return Err(Error::ParameterOutOfRange { c, k, lo, hi });
    }
    let ck = c - k;
    let alpha = -ck * ck - 2.0 * k;
    let beta = -ck.powi(4) / 2.0 - k * (2.0 * c - k).powi(2) / 2.0 - k.powi(3) / 6.0;
    Ok(WaveParams { c, k, alpha, beta })
}

/// The potential `F(φ)` of the first-order energy relation.
pub fn potential(phi: f64, params: &WaveParams) -> Result<f64> {
    let c = params.c;
    let d = phi - c;
    if d == 0.0 {
        return Err(Error::SingularInput(c));
    }
    Ok(-d * d / 2.0 + (2.0 * phi * phi * (3.0 * c - 2.0 * phi) / 3.0 + params.beta) / (d * d))
}

/// The two roots of `M(φ) = 6β` below `c`, the saddle `φ₁ = k` and the
/// center `φ₂`.
pub fn critical_points(params: &WaveParams) -> Result<(f64, f64)> {
    let c = params.c;
    let (lo, hi) = WaveParams::beta_window(c);
    if !(params.beta > lo && params.beta < hi) {
        return Err(Error::NoHomoclinic { beta: params.beta, lo, hi });
    }
    let target = 6.0 * params.beta;
    let g = |phi: f64| params.critical_map(phi) - target;
    let peak = c - 1.0;
    let mut left = peak - 1.0;
    while g(left) > 0.0 {
        left = peak - 2.0 * (peak - left);
    }
    let phi1 = bisect(g, left, peak, 0.0, 200).map(|b| b.root);
    let phi2 = bisect(g, peak, c, 0.0, 200).map(|b| b.root);
    match (phi1, phi2) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::NoHomoclinic { beta: params.beta, lo, hi }),
    }
}

/// Crest height `2c - k - 4/3 - (2/3)√(3(k - c + 4/3))`; also valid at the
/// limiting speeds.
pub fn crest_height(c: f64, k: f64) -> f64 {
    2.0 * c - k - 4.0 / 3.0 - 2.0 * (3.0 * (k - c + 4.0 / 3.0)).max(0.0).sqrt() / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    /// Smaller root of the crest quadratic.
    pub phi_minus: f64,
    /// Larger root (above `c`).
    pub phi_plus: f64,
    /// Wave crest; equals `phi_minus`.
    pub phi_max: f64,
    /// Saddle, equal to `k`.
    pub phi1: f64,
    /// Center.
    pub phi2: f64,
}

pub fn turning_points(params: &WaveParams) -> Result<TurningPoints> {
    let (c, k) = (params.c, params.k);
    let phi_max = crest_height(c, k);
    let half_gap = 2.0 * (3.0 * (k - c + 4.0 / 3.0)).sqrt() / 3.0;
    let mid = 2.0 * c - k - 4.0 / 3.0;
    let (phi1, phi2) = critical_points(params)?;
    Ok(TurningPoints {
        phi_minus: phi_max,
        phi_plus: mid + half_gap,
        phi_max,
        phi1,
        phi2,
    })
}

/// A sampled solitary wave, crest at `x = 0`.
///
/// The grid has `n` intervals and `n + 1` nodes including both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileGrid {
    pub half_width: f64,
    pub n: usize,
    pub x: Vec<f64>,
    pub phi: Vec<f64>,
    pub phi_x: Vec<f64>,
    pub params: WaveParams,
}

/// Grid size used when the caller has no preference: `L = max(100, 40/μ)`,
/// spacing at most 0.05 and at most a tenth of the gap `c - φ_max` between
/// crest and pole, which closes as `c - k → 4/3`.
pub fn default_resolution(params: &WaveParams) -> (f64, usize) {
    let half_width = (40.0 / params.decay_rate()).max(100.0);
    let gap = params.c - crest_height(params.c, params.k);
    let spacing = (0.1 * gap).min(0.05);
    let n = ((2.0 * half_width / spacing).ceil() as usize)
        .next_power_of_two()
        .max(4096);
    (half_width, n)
}

/// Profile on the default grid.
pub fn build_default_profile(params: &WaveParams) -> Result<ProfileGrid> {
    let (l, n) = default_resolution(params);
    build_profile(params, l, n)
}

pub fn build_profile(params: &WaveParams, half_width: f64, n: usize) -> Result<ProfileGrid> {
    if n < MIN_INTERVALS || n % 2 != 0 {
        return Err(Error::InvalidConfig(format!(
            "profile grid needs an even interval count >= {MIN_INTERVALS}, got {n}"
        )));
    }
    let mu = params.decay_rate();
    let required = -TAIL_TOL.ln() / mu;
    if !(half_width.is_finite() && half_width >= required) {
        return Err(Error::DomainTooSmall { half_width, required });
    }

    let WaveParams { c, k, alpha, .. } = *params;
    let grid = LineGrid::new(half_width, n);
    let h = grid.spacing();
    let m = grid.center();
    let phi_max = crest_height(c, k);
    let amplitude = phi_max - k;
    let switch_level = 0.5 * amplitude;

    let mut phi = vec![k; n + 1];
    let mut phi_x = vec![0.0; n + 1];
    phi[m] = phi_max;

    let solver = Dopri5::new(ODE_RTOL, 1e-300);
    let second_order = |_x: f64, y: &[f64; 2]| {
        let w = y[0].max(0.0);
        [y[1], w + 2.0 * (c - w.sqrt()) + alpha]
    };
    let first_order = |_x: f64, y: &[f64; 1]| {
        let p = k + y[0].exp();
        [-(params.crest_quadratic(p).max(0.0) / 12.0).sqrt() / (c - p)]
    };

    let mut w = [(phi_max - c).powi(2), 0.0];
    let mut log_eta: Option<[f64; 1]> = None;
    let mut step = 0.0;
    let mut step1 = 0.0;
    for i in 1..=m {
        let (x0, x1) = ((i - 1) as f64 * h, i as f64 * h);
        let (p, dp) = if let Some(s) = log_eta.as_mut() {
            *s = solver.integrate(first_order, x0, *s, x1, &mut step1)?;
            let p = k + s[0].exp();
            let dp = -(p - k) * (params.crest_quadratic(p).max(0.0) / 12.0).sqrt() / (c - p);
            (p, dp)
        } else {
            w = solver.integrate(second_order, x0, w, x1, &mut step)?;
            let root = w[0].max(0.0).sqrt();
            let p = c - root;
            let dp = -w[1] / (2.0 * root);
            if p - k <= switch_level {
                log_eta = Some([(p - k).ln()]);
                step1 = step;
            }
            (p, dp)
        };
        if !(p.is_finite() && dp.is_finite()) {
            return Err(Error::IntegrationFailure(format!("non-finite profile at x = {x1}")));
        }
        if (p - k).abs() < TAIL_TOL {
            // flat tail from here on
            break;
        }
        phi[m + i] = p;
        phi_x[m + i] = dp;
    }
    if (phi[n] - k).abs() > 1e-8 * amplitude.max(1e-300) + TAIL_TOL {
        return Err(Error::IntegrationFailure(format!(
            "profile does not reach the background within L = {half_width}: phi(L) - k = {:e}",
            phi[n] - k
        )));
    }
    for i in 1..=m {
        phi[m - i] = phi[m + i];
        phi_x[m - i] = -phi_x[m + i];
    }

    Ok(ProfileGrid {
        half_width,
        n,
        x: grid.nodes(),
        phi,
        phi_x,
        params: *params,
    })
}

/// `(res2, res1)`: the largest second-order residual (fourth-order centered
/// differences on interior nodes) and the largest first-order residual
/// `|2φ'² + F(φ) - α|`.
pub fn profile_residuals(p: &ProfileGrid) -> (f64, f64) {
    let WaveParams { c, alpha, .. } = p.params;
    let h = p.grid().spacing();
    let w: Vec<f64> = p.phi.iter().map(|v| (v - c) * (v - c)).collect();
    let mut res2: f64 = 0.0;
    for i in 2..w.len().saturating_sub(2) {
        let wxx = (-w[i - 2] + 16.0 * w[i - 1] - 30.0 * w[i] + 16.0 * w[i + 1] - w[i + 2])
            / (12.0 * h * h);
        res2 = res2.max((wxx - w[i] - 2.0 * p.phi[i] - alpha).abs());
    }
    let mut res1: f64 = 0.0;
    for (v, d) in p.phi.iter().zip(&p.phi_x) {
        let f = potential(*v, &p.params).unwrap_or(f64::INFINITY);
        res1 = res1.max((2.0 * d * d + f - alpha).abs());
    }
    (res2, res1)
}

/// Direction of [`background_shift`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shift {
    /// Remove the background: values minus `k`, speed `c - k`.
    ToZero,
    /// Lift a zero-background profile onto background `k`, speed `c + k`.
    Lift(f64),
}

/// The Galilean-type symmetry `u(x, t) ↦ u(x - kt, t) + k` evaluated at `t = 0`.
pub fn background_shift(p: &ProfileGrid, dir: Shift) -> Result<ProfileGrid> {
    let (offset, params) = match dir {
        Shift::ToZero => {
            if p.params.k == 0.0 {
                return Ok(p.clone());
            }
            (-p.params.k, derive_constants(p.params.c - p.params.k, 0.0)?)
        }
        Shift::Lift(k) => (k, derive_constants(p.params.c + k, p.params.k + k)?),
    };
    let mut out = p.clone();
    for v in out.phi.iter_mut() {
        *v += offset;
    }
    out.params = params;
    Ok(out)
}

impl ProfileGrid {
    pub fn grid(&self) -> LineGrid {
        LineGrid::new(self.half_width, self.n)
    }

    pub fn field(&self) -> LineField {
        LineField::new(self.grid(), self.phi.clone())
    }

    pub fn derivative_field(&self) -> LineField {
        LineField::new(self.grid(), self.phi_x.clone())
    }

    /// Periodic samples obtained by dropping the duplicate right endpoint.
    pub fn periodic(&self) -> PeriodicField {
        PeriodicField::new(
            PeriodicGrid::new(self.half_width, self.n),
            self.phi[..self.n].to_vec(),
        )
    }

    pub fn max_value(&self) -> f64 {
        self.phi.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max |φ(x) - φ(-x)|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.phi.len();
        (0..n)
            .map(|i| (self.phi[i] - self.phi[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }

    /// Piecewise cubic Hermite interpolation of `φ`, flat outside the grid.
    pub fn interpolate(&self, x: f64) -> f64 {
        let h = 2.0 * self.half_width / self.n as f64;
        let s = (x + self.half_width) / h;
        if s <= 0.0 {
            return self.phi[0];
        }
        if s >= self.n as f64 {
            return self.phi[self.n];
        }
        let i = (s.floor() as usize).min(self.n - 1);
        let t = s - i as f64;
        let (p0, p1) = (self.phi[i], self.phi[i + 1]);
        let (d0, d1) = (self.phi_x[i] * h, self.phi_x[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * p0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * p1
            + (t3 - t2) * d1
    }

    /// `profile.csv`: header `x,phi,phi_x`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "x,phi,phi_x")?;
        for i in 0..self.x.len() {
            writeln!(
                out,
                "{},{},{}",
                crate::io::fmt_f64(self.x[i]),
                crate::io::fmt_f64(self.phi[i]),
                crate::io::fmt_f64(self.phi_x[i])
            )?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn meta(&self) -> ProfileMeta {
        let (res2, res1) = profile_residuals(self);
        ProfileMeta {
            c: self.params.c,
            k: self.params.k,
            alpha: self.params.alpha,
            beta: self.params.beta,
            phi_max: crest_height(self.params.c, self.params.k),
            half_width: self.half_width,
            n: self.n,
            res1,
            res2,
        }
    }
}

/// `profile.meta.json` sidecar.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileMeta {
    pub c: f64,
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi_max: f64,
    pub half_width: f64,
    pub n: usize,
    pub res1: f64,
    pub res2: f64,
}

/// Samples of `F` on the strip `(c - 4/3, c)`, stopping short of the pole.
pub fn sample_potential(params: &WaveParams, count: usize) -> Vec<(f64, f64)> {
    let c = params.c;
    let (lo, hi) = (c - 4.0 / 3.0, c - 0.05);
    (0..count)
        .filter_map(|i| {
            let phi = lo + (hi - lo) * i as f64 / (count - 1) as f64;
            potential(phi, params).ok().map(|f| (phi, f))
        })
        .collect()
}
