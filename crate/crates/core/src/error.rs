use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("element index {index} out of range for ground set of size {size}")]
    ElementOutOfRange { index: usize, size: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exhaustive computation would exceed its configured cap.
    #[error("{what}: size {size} exceeds enumeration cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },

    /// An operation needs a specific matroid realization.
    #[error("expected a {expected} matroid, got {found}")]
    WrongMatroid { expected: &'static str, found: &'static str },

    /// A documented precondition did not hold on the supplied input.
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
