use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed polynomial text or JSON.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed input that violates a precondition (duplicate exponents,
    /// zero coefficients, size guardrails, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// A geometric precondition of an operation is not met.
    #[error("geometry: {0}")]
    Geometry(String),
    /// An operation was called outside its contract, e.g. the nonseparable
    /// solver on a separable support.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Numerical failure (overflow, singular system).
    #[error("numerical failure: {0}")]
    Numeric(String),
    /// The polynomial is not copositive, so the requested object does not exist.
    #[error("not copositive: {0}")]
    NotCopositive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
