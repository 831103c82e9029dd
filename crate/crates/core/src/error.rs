use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("group order {order} exceeds the configured cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },

    #[error("G-set with {size} points exceeds the configured cap {cap}")]
    PointCapExceeded { size: usize, cap: usize },

    #[error("module dimension {dim} exceeds the configured cap {cap}")]
    DimCapExceeded { dim: usize, cap: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unknown group selector `{0}`")]
    UnknownGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("biset is not right-free: {0}")]
    NotRightFree(String),

    #[error("group `{0}` is outside the window")]
    WindowMiss(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("atom decomposition is not unique: {0}")]
    NonUniqueDecomposition(String),

    #[error("monoid is not cancellative: {0}")]
    NonCancellative(String),

    #[error("injection images overlap")]
    ImagesOverlap,

    #[error("objects are not disjointly supported")]
    NotDisjoint,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
