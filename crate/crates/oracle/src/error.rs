use thiserror::Error;

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph would have {n} vertices, above the limit of {limit}")]
    TooLarge { n: u64, limit: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("not distance-regular: {0}")]
    NotDistanceRegular(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular linear system")]
    Singular,

    #[error(transparent)]
    Core(#[from] drg_walk_core::Error),
}
