use thiserror::Error;

/// Errors raised by field, polynomial and search operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivideByZero,
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown symbol `{symbol}` at position {pos}")]
    UnknownSymbol { pos: usize, symbol: String },
    #[error("invalid field specification: {0}")]
    InvalidField(String),
    #[error("invalid bound: {0}")]
    InvalidBound(String),
    #[error("invalid cap: {0}")]
    InvalidCap(String),
    #[error("required extension degree {required} exceeds cap {cap}")]
    ExtensionCapExceeded { required: u64, cap: u64 },
    #[error("fiber requires an algebraic extension of QQ (irreducible factor of degree > 1)")]
    UnsupportedAlgebraicExtension,
    #[error("point set is not compatible: {0}")]
    NotCompatible(String),
    #[error("labeling is not consistent: {0}")]
    NotConsistent(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("{0} lies in K[x^p]")]
    FInKxp(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("malformed record: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
