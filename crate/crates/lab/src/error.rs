use std::path::PathBuf;

use thiserror::Error;
use treegraded::{ColoringError, ForgeError, ParseError, SpaceError};

#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("instance has {vertices} vertices, above the limit of {max}")]
    TooLarge { vertices: usize, max: usize },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl LabError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }
}
