use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("structure constants failed validation: {0}")]
    InvalidAlgebra(String),
    #[error("polarization is not subordinate to f: {0}")]
    NotSubordinate(String),
    #[error("functional is zero")]
    ZeroFunctional,
    #[error("unsupported polarization: {0}")]
    UnsupportedPolarization(String),
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("bad sequence: {0}")]
    BadSequence(String),
    #[error("empty window: {0}")]
    EmptyWindow(String),
    #[error("divergent sequence: {0}")]
    Divergent(String),
    #[error("candidate is not in the limit set: {0}")]
    NotInLimitSet(String),
    #[error("functional lies in the wrong layer: {0}")]
    WrongLayer(String),
    #[error("frame scale undefined: (f5, f6) = (0, 0)")]
    ScaleUndefined,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("rule error: {0}")]
    Rule(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
