use thiserror::Error;

use crate::estimators::Violation;

/// Errors raised by the numerical and statistical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of the function.
    #[error("domain error: {name} = {value} ({requirement})")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// Adaptive quadrature ran out of subdivisions.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (error estimate {error_estimate:e}, tolerance {tolerance:e})"
    )]
    NoConvergence {
        subdivisions: usize,
        error_estimate: f64,
        tolerance: f64,
    },

    #[error("invalid estimator: {0}")]
    InvalidEstimator(Violation),

    #[error("invalid population set: {0}")]
    InvalidPopulation(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        requirement,
    }
}
