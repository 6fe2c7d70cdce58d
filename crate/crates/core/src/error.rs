use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates the invariant of the type or operation that owns it.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Input outside the mathematical domain of a formula.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// Estimator is undefined for the given data (e.g. zero mean count).
    #[error("{0} is undefined for this input")]
    Undefined(&'static str),

    #[error("support mismatch: expected {expected} outcomes, got {found}")]
    SupportMismatch { expected: usize, found: usize },

    #[error("sweep grid has {points} points, cap is {cap}")]
    GridTooLarge { points: u128, cap: u64 },

    #[error("sweep grid is empty")]
    EmptyGrid,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }
}
