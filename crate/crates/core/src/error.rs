//! Error type shared by every module of the crate.

use std::fmt;

/// Failures reported by the factoring pipeline.
///
/// `PromiseViolation` and `Cap` are contract violations: the input or the
/// configuration is outside what the requested operation guarantees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Text input could not be parsed; `pos` is a byte offset.
    Parse { pos: usize, msg: String },
    /// Operands live in different variable spaces.
    VariableCountMismatch { left: usize, right: usize },
    /// Division by the zero polynomial.
    DivisionByZero,
    /// The queried polynomial is identically zero.
    ZeroPolynomial,
    /// The operation needs a non-constant input.
    ConstantInput,
    /// A dense operation expected a polynomial monic in `x`.
    NotMonic,
    /// The input is not in the image of an isolation map.
    NotInCodomain(String),
    /// Sparse interpolation could not explain the evaluations.
    InterpolationFailure(String),
    /// The input does not satisfy the promise of the requested algorithm.
    PromiseViolation(String),
    /// A configured size bound would be exceeded.
    Cap(String),
    /// Bad configuration or argument.
    Config(String),
    /// An internal consistency check failed.
    Internal(String),
}

impl Error {
    /// True for errors the command line reports with the contract-violation exit code.
    pub fn is_contract_violation(&self) -> bool {
        matches!(self, Error::PromiseViolation(_) | Error::Cap(_))
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at offset {pos}: {msg}"),
            Error::VariableCountMismatch { left, right } => {
                write!(f, "variable count mismatch: {left} vs {right}")
            }
            Error::DivisionByZero => write!(f, "division by the zero polynomial"),
            Error::ZeroPolynomial => write!(f, "polynomial is identically zero"),
            Error::ConstantInput => write!(f, "input must be non-constant"),
            Error::NotMonic => write!(f, "polynomial is not monic in x"),
            Error::NotInCodomain(m) => write!(f, "not in the image of the isolation map: {m}"),
            Error::InterpolationFailure(m) => write!(f, "interpolation failure: {m}"),
            Error::PromiseViolation(m) => write!(f, "promise violation: {m}"),
            Error::Cap(m) => write!(f, "cap exceeded: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
