use alloc::string::String;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("missing Hodge integral {0}")]
    MissingHodge(String),
    #[error("table is not closed under splitting: missing {0}")]
    InsufficientClosure(String),
    #[error("linear system is underdetermined: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },
    #[error("linear system is inconsistent at equation {0}")]
    Inconsistent(usize),
    #[error("precision too low: {0}")]
    PrecisionTooLow(String),
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! bail {
    ($variant:ident, $($arg:tt)*) => {
        return Err($crate::error::Error::$variant(alloc::format!($($arg)*)))
    };
}
pub(crate) use bail;
