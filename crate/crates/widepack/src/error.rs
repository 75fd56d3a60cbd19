use thiserror::Error;

/// Errors shared across the solver modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("coloring error: {0}")]
    Coloring(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("separator does not separate: {0}")]
    Separator(String),
    #[error("path family ordering could not be verified: {0}")]
    PathOrdering(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
