use thiserror::Error;

/// Errors raised by ring construction, linear algebra, code operations and
/// the enumeration engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("element {0} is not a unit")]
    NotAUnit(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("enumeration guard exceeded: {estimated} items requested, guard is {guard}")]
    GuardExceeded { estimated: String, guard: u128 },

    #[error("internal cross-check fault: {0}")]
    CrossCheck(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
