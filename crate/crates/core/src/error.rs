//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The iterative eigensolver did not reach the requested residual.
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations (tol {tol:.3e})")]
    Convergence {
        residual: f64,
        iterations: usize,
        tol: f64,
    },

    /// A density matrix violated hermiticity, trace or positivity bounds.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A measurement outside the supported rank-1 families was supplied.
    #[error("unsupported measurement: {0}")]
    UnsupportedMeasurement(String),

    /// Correlator-table reconstruction produced a non-physical matrix.
    #[error("inconsistent correlators: {0}")]
    InconsistentCorrelators(String),

    /// The requested factorization field does not exist (negative radicand).
    #[error("no factorization: {0}")]
    NoFactorization(String),

    /// Fit data cannot determine the model parameters.
    #[error("fit underdetermined: {0}")]
    FitUnderdetermined(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
