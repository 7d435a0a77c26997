//! Smooth solitary waves of the Fornberg–Whitham equation
//!
//! ```text
//! u_t + u u_x + (1 - ∂ₓ²)⁻¹ u_x = 0
//! ```
//!
//! The crate builds the solitary-wave profiles, evaluates the conserved
//! functionals, computes the spectrum of the linearized operator
//! `𝓛 = (c - φ₀) - (1 - ∂ₓ²)⁻¹` by Prüfer-angle shooting, evaluates the
//! stability index `d''(c)` with its critical speed `c₀`, and evolves perturbed
//! waves to measure their orbital distance.
//!
//! Each capability has a runnable program under `examples/`; the `fw` binary
//! writes the corresponding CSV/JSON artifacts.

pub mod cli;
pub mod error;
pub mod evolve;
pub mod functionals;
pub mod io;
pub mod nonlocal;
pub mod ode;
pub mod profile;
pub mod roots;
pub mod spectral;
pub mod stability;

pub use error::{Error, Result};
pub use functionals::FunctionalValues;
pub use nonlocal::{Field, LineField, LineGrid, PeriodicField, PeriodicGrid};
pub use profile::{ProfileGrid, TurningPoints, WaveParams};
pub use spectral::SpectralReport;
pub use stability::{StabilityReport, Verdict};
pub use evolve::{OrbitalTrace, SimConfig, SimState};
