use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node-not-found: {0}")]
    NodeNotFound(usize),
    #[error("empty-hypernetwork")]
    EmptyHypernetwork,
    #[error("empty-hyperedge: {0}")]
    EmptyHyperedge(usize),
    #[error("invalid-denominator")]
    InvalidDenominator,
    #[error("invalid-config: {0}")]
    InvalidConfig(String),
    #[error("stale-cache: topology changed since the forward pass")]
    StaleCache,
    #[error("no-actions")]
    NoActions,
    #[error("insufficient-experience: replay buffer holds {0} experiences")]
    InsufficientExperience(usize),
    #[error("empty-trace")]
    EmptyTrace,
    #[error("empty-dataset")]
    EmptyDataset,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("checkpoint-version: found {found:?}, expected {expected}")]
    CheckpointVersion { found: String, expected: String },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
