//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures surfaced by measures, copulas, gauges, estimators and I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or argument lies outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation is not defined for this exponent measure.
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),

    /// A conditional distribution was requested at a conditioner of exactly 0 or 1.
    #[error("degenerate conditioner: v = {0}")]
    DegenerateConditioner(f64),

    /// A root finder was handed an interval without a sign change.
    #[error("interval [{lo}, {hi}] does not bracket a root")]
    NonBracketing { lo: f64, hi: f64 },

    /// The length of an argument does not match the dimension of the object.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Too few threshold exceedances to report a tail estimate.
    #[error("only {n_exceed} exceedances above the threshold (need at least {required})")]
    LowData { n_exceed: usize, required: usize },

    /// An optimiser or root finder failed to meet its tolerance.
    #[error("numerical failure: {0}")]
    Numeric(String),

    /// A vine specification is malformed; `pointer` is a JSON pointer to the culprit.
    #[error("invalid specification at {pointer}: {message}")]
    InvalidSpec { pointer: String, message: String },

    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn spec(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidSpec {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
