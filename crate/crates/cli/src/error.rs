use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Core(#[from] qobs_core::Error),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("operator {0:?} is neither a readable file nor a bundled operator")]
    OperatorNotFound(String),

    #[error("operator acts on {operator} qubits but the state has {state}")]
    SizeMismatch { operator: usize, state: usize },

    #[error("cannot summarize an empty sample")]
    EmptySample,

    #[error("expected value {0} is outside [-1, 1]")]
    OutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
