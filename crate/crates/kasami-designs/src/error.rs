use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Rejected parameter triple or malformed request; maps to CLI exit 2.
    #[error("{0}")]
    InvalidParams(String),

    /// A precondition on an operation argument was violated.
    #[error("{0}")]
    InvalidArgument(String),

    /// An element was required to lie in the subfield GF(p^s) but does not.
    #[error("element is not in the subfield GF(p^s)")]
    NotInSubfield,

    /// A scan would exceed its work cap.
    #[error("work budget exceeded: estimated cost {cost} > cap {cap}; {hint}")]
    BudgetExceeded { cost: u128, cap: u128, hint: String },

    /// An internal arithmetic identity failed; indicates a bug, never a data error.
    #[error("internal arithmetic check failed: {0}")]
    Internal(String),

    /// A structural verification (dimension, design property, comparison) failed.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
