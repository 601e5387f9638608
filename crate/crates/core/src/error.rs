use thiserror::Error;

/// Errors raised by the kernel. Check failures are never errors; they are
/// reported through [`crate::report::Report`] entries instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible cyclotomic orders {0} and {1}")]
    OrderMismatch(u64, u64),
    #[error("non-simple parameter: {0}")]
    NonSimple(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("incomplete decomposition: {0}")]
    Incomplete(String),
    #[error("trace unavailable: {0}")]
    TraceUnavailable(String),
    #[error("solver failure: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
