use std::path::PathBuf;

use thiserror::Error;

/// Failures that stop a command before any result can be reported.
///
/// Numerical failures inside a mechanism are not in this list: the pipeline
/// records them as statuses next to the affected values.
#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error(transparent)]
    Numeric(#[from] openpath_core::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl PipelineError {
    pub(crate) fn format(path: &std::path::Path, message: impl Into<String>) -> Self {
        PipelineError::Format {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }
}
