use thiserror::Error;

/// Errors produced by the wave constructions, the spectral machinery and the
/// evolution harness.
#[derive(Debug, Error)]
pub enum Error {
    /// No homoclinic orbit exists for this background.
    #[error("background k = {k} outside the admissible window ({lo}, {hi}) for c = {c}; with k = 0 the speed must lie in (1, 4/3)")]
    ParameterOutOfRange { c: f64, k: f64, lo: f64, hi: f64 },

    #[error("potential is singular at phi = c = {0}")]
    SingularInput(f64),

    #[error("beta = {beta} outside the two-root window ({lo}, {hi}); no homoclinic orbit")]
    NoHomoclinic { beta: f64, lo: f64, hi: f64 },

    #[error("half-width {half_width} too small for the tail to decay below tolerance (need at least {required})")]
    DomainTooSmall { half_width: f64, required: f64 },

    #[error("profile integration failed: {0}")]
    IntegrationFailure(String),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("operation requires a zero-background profile, got k = {0}")]
    NonzeroBackground(f64),

    #[error("truncation too small: |A(-X, lambda) - A_inf| = {mismatch:e} exceeds 1e-10")]
    TruncationTooSmall { mismatch: f64 },

    #[error("Prufer angle at the lower spectral bound is negative ({theta}); eigenvalue bracket is broken")]
    BracketFailure { theta: f64 },

    #[error("speed c = {0} outside the open interval (1, 4/3)")]
    DomainError(f64),

    #[error("non-finite value produced at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than by a failing
    /// computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ParameterOutOfRange { .. }
                | Error::NoHomoclinic { .. }
                | Error::DomainTooSmall { .. }
                | Error::DomainError(_)
                | Error::NonzeroBackground(_)
                | Error::InvalidConfig(_)
                | Error::Toml(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
