//! Error type shared by every module.

use thiserror::Error;

/// Errors raised by oracles, solvers, and the benchmark harness.
#[derive(Debug, Error)]
pub enum OptError {
    /// A scalar or vector parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// A point lies outside the domain of the nonsmooth term.
    #[error("point outside dom h: {0}")]
    Domain(String),
    /// Vector or matrix shapes do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An operation was called in a state where it is undefined.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A NaN or infinity appeared in floating-point arithmetic.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// An input file or command line could not be interpreted.
    #[error("usage error: {0}")]
    Usage(String),
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// CSV serialization failure.
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, OptError>;

pub(crate) fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(OptError::Parameter(format!("{name} must be positive and finite, got {value}")))
    }
}

pub(crate) fn check_nonnegative(name: &str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(OptError::Parameter(format!("{name} must be nonnegative and finite, got {value}")))
    }
}
