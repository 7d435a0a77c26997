//! The stability scalar `d(c) = E(φ₀) + cQ(φ₀)`.
//!
//! Here `d'(c)` is the charge of the wave, written in the normalization
//! `∫φ₀²`, and the sign of `d''(c)` decides stability. Both have closed forms
//! in `c`; `d''` changes sign once on `(7/6, 4/3)`, at the critical speed `c₀`.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{self, FunctionalsReport};
use crate::io::fmt_f64;
use crate::profile::{build_default_profile, derive_constants};
use crate::roots::bisect;

pub const DEFAULT_FD_STEP: f64 = 1e-4;

fn check_speed(c: f64) -> Result<()> {
    if c > 1.0 && c < 4.0 / 3.0 {
        Ok(())
    } else {
        Err(Error::DomainError(c))
    }
}

/// `(3c - 2 + 3√(c(c-1))) / √(4 - 3c)`.
pub fn log_argument(c: f64) -> Result<f64> {
    check_speed(c)?;
    Ok((3.0 * c - 2.0 + 3.0 * (c * (c - 1.0)).sqrt()) / (4.0 - 3.0 * c).sqrt())
}

/// `∫φ₀²` in closed form.
pub fn q_closed_form(c: f64) -> Result<f64> {
    let ln = log_argument(c)?.ln();
    let r = (c * (c - 1.0)).sqrt();
    Ok(16.0 * (c - 1.0) * r + 8.0 / 3.0 * (c - 1.0) * (4.0 - 3.0 * c) * ln)
}

/// `d''(c)`, the derivative of [`q_closed_form`].
pub fn d2_closed_form(c: f64) -> Result<f64> {
    check_speed(c)?;
    Ok(d2_in_s(4.0 - 3.0 * c))
}

/// `d''` written in `s = 4 - 3c`. The logarithm splits as
/// `ln(2 - s + √((4-s)(1-s))) - ½ ln s`, which keeps full precision as
/// `s → 0`.
fn d2_in_s(s: f64) -> f64 {
    let r = ((4.0 - s) * (1.0 - s)).sqrt();
    let ln = (2.0 - s + r).ln() - 0.5 * s.ln();
    28.0 * r / 3.0 + 8.0 / 3.0 * (2.0 * s - 1.0) * ln
}

/// `c0.json`.
#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct C0Search {
    pub c0: f64,
    /// Final bracket, in `c`.
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
    /// `d''(c₀)`.
    pub residual: f64,
}

/// Tolerance on `s` for the critical-speed bisection.
pub const C0_STOL: f64 = 1e-15;

/// The zero of `d''` on `(7/6, 4/3)`.
pub fn find_c0() -> C0Search {
    // brackets s = 2^-j / 2 until d'' turns negative
    let mut hi = 0.5;
    let mut lo = hi / 2.0;
    while d2_in_s(lo) > 0.0 {
        hi = lo;
        lo /= 2.0;
    }
    let b = bisect(d2_in_s, lo, hi, C0_STOL, 200).expect("d'' changes sign on the bracket");
    let c_of = |s: f64| (4.0 - s) / 3.0;
    let c0 = c_of(b.root);
    C0Search {
        c0,
        bracket_lo: c_of(b.hi),
        bracket_hi: c_of(b.lo),
        iterations: b.iterations,
        residual: d2_in_s(b.root),
    }
}

/// `find_c0` evaluated once per process.
pub fn critical_speed() -> f64 {
    static C0: OnceLock<f64> = OnceLock::new();
    *C0.get_or_init(|| find_c0().c0)
}

/// `∫φ₀²` by quadrature over a freshly built default-resolution profile.
pub fn q_numeric(c: f64) -> Result<f64> {
    check_speed(c)?;
    let p = build_default_profile(&derive_constants(c, 0.0)?)?;
    Ok(functionals::squared_mass(&p.field()))
}

/// Central difference of [`q_numeric`].
pub fn d2_finite_difference(c: f64, h: f64) -> Result<f64> {
    check_speed(c - h)?;
    check_speed(c + h)?;
    let (qp, qm) = rayon::join(|| q_numeric(c + h), || q_numeric(c - h));
    Ok((qp? - qm?) / (2.0 * h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Indeterminate,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Stable => "Stable",
            Verdict::Indeterminate => "Indeterminate",
        })
    }
}

/// Stable below `c₀`; above it the criterion says nothing.
pub fn stability_verdict(c: f64) -> Result<Verdict> {
    let d2 = d2_closed_form(c)?;
    Ok(if c < critical_speed() && d2 > 0.0 {
        Verdict::Stable
    } else {
        Verdict::Indeterminate
    })
}

/// `stability.json`.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub c: f64,
    #[serde(rename = "Q_closed")]
    pub q_closed: f64,
    pub d2_closed: f64,
    pub d2_fd: f64,
    pub verdict: Verdict,
    pub c0: f64,
    pub functionals: FunctionalsReport,
}

pub fn stability_report(c: f64, h: f64) -> Result<StabilityReport> {
    let q_closed = q_closed_form(c)?;
    let d2_closed = d2_closed_form(c)?;
    let d2_fd = d2_finite_difference(c, h)?;
    let p = build_default_profile(&derive_constants(c, 0.0)?)?;
    Ok(StabilityReport {
        c,
        q_closed,
        d2_closed,
        d2_fd,
        verdict: stability_verdict(c)?,
        c0: critical_speed(),
        functionals: functionals::report(&p)?,
    })
}

/// One row of `d2_sweep.csv`; failed points keep the error text.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub c: f64,
    pub outcome: std::result::Result<(f64, f64, f64, Verdict), String>,
}

/// `steps` evenly spaced speeds from `cmin` to `cmax`, computed in parallel
/// and returned in ascending order.
pub fn sweep_d2(cmin: f64, cmax: f64, steps: usize, h: f64) -> Result<Vec<SweepRow>> {
    if steps == 0 || !(cmin <= cmax) || (steps == 1 && cmin != cmax) {
        return Err(Error::InvalidConfig(format!(
            "empty speed range [{cmin}, {cmax}] with {steps} steps"
        )));
    }
    let speeds: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                cmin
            } else {
                cmin + (cmax - cmin) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    Ok(speeds
        .par_iter()
        .map(|&c| {
            let row = || -> Result<_> {
                Ok((
                    q_closed_form(c)?,
                    d2_closed_form(c)?,
                    d2_finite_difference(c, h)?,
                    stability_verdict(c)?,
                ))
            };
            SweepRow {
                c,
                outcome: row().map_err(|e| e.to_string()),
            }
        })
        .collect())
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let mut out = String::from("c,Q_closed,d2_closed,d2_fd,verdict\n");
    for r in rows {
        match &r.outcome {
            Ok((q, d2, fd, v)) => out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_f64(r.c),
                fmt_f64(*q),
                fmt_f64(*d2),
                fmt_f64(*fd),
                v
            )),
            Err(e) => {
                let msg = e.replace(['"', ','], " ");
                out.push_str(&format!("{},NaN,NaN,NaN,error: {msg}\n", fmt_f64(r.c)));
            }
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}
