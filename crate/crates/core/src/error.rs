//! Error type shared across the crate.

use thiserror::Error;

#[derive(Error, Debug, Clone)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation requested outside the supported accuracy range.
    #[error("argument out of supported range: {what} = {value}")]
    OutOfRange { what: &'static str, value: f64 },

    /// A floating-point failure (overflow, NaN) inside a computation.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Adaptive refinement hit its size cap before self-consistency.
    #[error(
        "no convergence at n = {n}: last two values {previous:e} and {value:e} differ by more than {tol:e}"
    )]
    Convergence {
        value: f64,
        previous: f64,
        n: usize,
        tol: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
