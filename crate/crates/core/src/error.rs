use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {value} outside domain ({reason})")]
    Domain {
        func: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} = {value} outside supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("jet mismatch: {0}")]
    JetMismatch(String),

    #[error("empty domain: {0}")]
    EmptyDomain(String),

    #[error("unsupported inner function: {0}")]
    Unsupported(String),

    #[error("range violation: {0}")]
    RangeViolation(String),

    #[error("non-finite value at x = {x} (order {order})")]
    NonFinite { x: f64, order: usize },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            func,
            value,
            reason,
        }
    }

    pub(crate) fn range(what: &'static str, value: i64, min: i64, max: i64) -> Self {
        Error::OutOfRange {
            what,
            value,
            min,
            max,
        }
    }
}
