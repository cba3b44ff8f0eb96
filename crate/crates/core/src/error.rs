use thiserror::Error;

/// Errors produced by the library and the command-line driver.
#[derive(Debug, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("invalid input: {0}")]
    Validation(String),

    /// Adaptive quadrature ran out of recursion depth before meeting its tolerance.
    #[error("quadrature did not converge: value {value:e}, error estimate {estimate:e} > tolerance {tolerance:e}")]
    Quadrature {
        value: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
