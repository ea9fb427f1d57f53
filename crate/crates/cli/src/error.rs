use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Model(#[from] nfsec_core::Error),
}

impl HarnessError {
    /// Short class name used for exit codes and row error tags.
    pub fn class(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Io { .. } | Self::Csv { .. } | Self::Json { .. } => "io",
            Self::Model(nfsec_core::Error::SubproblemNotConverged { .. }) => "solver",
            Self::Model(_) => "model",
        }
    }
}
