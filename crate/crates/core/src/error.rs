//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure modes of the numerical and symbolic operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation requested at a pole; the residue is attached when known.
    #[error("pole at s = {location} (residue {residue})")]
    Pole { location: String, residue: String },
    /// Argument on the branch cut of the fixed logarithm.
    #[error("branch error: {0}")]
    Branch(String),
    /// Requested precision cannot be reached within internal limits.
    #[error("precision error: {0}")]
    Precision(String),
    /// A generated object violates its structural invariant.
    #[error("structural error: {0}")]
    Structural(String),
    /// The base manifold or geometry is not supported by the operation.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Malformed spectrum file or configuration text.
    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },
    /// Index outside the admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Root isolation failed on the reported interval.
    #[error("root isolation failed on [{lo}, {hi}]: {message}")]
    RootIsolation { lo: String, hi: String, message: String },
    /// Input/output failure.
    #[error("io error: {0}")]
    Io(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
