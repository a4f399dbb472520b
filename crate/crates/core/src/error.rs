use thiserror::Error;

use crate::combmap::Synthesis;

/// Failure modes shared by every module.
///
/// The CLI maps `InvalidInput` to exit code 2 and every numeric failure
/// (including `NotConverged`) to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numeric failure: {message}")]
    NumericFailure {
        message: String,
        /// Logarithm of the value that could not be represented, when the
        /// failure is an overflow of `exp`.
        log_value: Option<f64>,
    },

    #[error("pole: {0}")]
    Pole(String),

    #[error("solver diverged: {0}")]
    SolverDiverged(String),

    #[error("not converged after {} iterations (residual {:.3e})", best.iterations, best.residual)]
    NotConverged { best: Box<Synthesis> },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericFailure {
            message: msg.into(),
            log_value: None,
        }
    }

    /// `true` for errors caused by the caller's input rather than by the
    /// numerics.
    pub fn is_invalid_input(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
