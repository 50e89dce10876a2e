use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed array or family text.
    #[error("syntax error: {0}")]
    Syntax(String),

    /// The array parses but violates an intersection-array invariant.
    #[error("invalid intersection array: {0}")]
    Invalid(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Bounds built on C(G,k) are only defined for k >= 3.
    #[error("degree k = {0} is below 3; C(G,k)-based bounds are undefined for it")]
    DegreeTooSmall(u64),

    /// A distance pattern that violates the triangle inequality or the diameter.
    #[error("invalid distance pattern: {0}")]
    Distances(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Two independent routes to the same exact quantity disagree.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
