use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is out of range: {admissible}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        admissible: String,
    },

    #[error("quadrature coefficients degenerate at alpha = 2 (use the classical backend)")]
    Degenerate,

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("backend does not support this configuration: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("linear system (I - dt A) is singular for dt = {dt}")]
    SingularSystem { dt: f64 },

    #[error("step size underflow at t = {t}: dt = {dt} fell below {min}")]
    StepUnderflow { t: f64, dt: f64, min: f64 },

    #[error("maximum number of steps ({0}) exceeded")]
    MaxStepsExceeded(usize),

    #[error("solution diverged at t = {t}: max |u| = {max_abs}")]
    Diverged { t: f64, max_abs: f64 },

    #[error("profile never crosses level {level}")]
    NoCrossing { level: f64 },

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("no residuals in the decay fit window")]
    InsufficientDecay,

    #[error("window too small: boundary density ratio {ratio:e} exceeds 1e-6 of the peak")]
    WindowTooSmall { ratio: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
