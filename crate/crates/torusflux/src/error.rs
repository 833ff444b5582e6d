use thiserror::Error;

/// Errors produced by the solver, the constitutive-law machinery and the
/// sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("CFL violation: dt = {dt:.6e} exceeds limit {dt_max:.6e}; suggested dt = {suggested:.6e}")]
    CflViolation { dt: f64, dt_max: f64, suggested: f64 },

    #[error("Picard iteration did not converge after {iterations} iterations (last residual {residual:.6e})")]
    PicardDiverged { iterations: usize, residual: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn resolution(msg: impl Into<String>) -> Self {
        Error::Resolution(msg.into())
    }
    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }
    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
