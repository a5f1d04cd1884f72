use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by construction, analysis and I/O routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("alist parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("alist validation error: {0}")]
    Validation(String),

    #[error("edge between VN {vn} and CN {cn} already exists")]
    DuplicateEdge { vn: usize, cn: usize },

    #[error("work budget of {budget} search nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("{0} is not tracked")]
    Untracked(String),

    #[error("output {0} already exists (use --force to overwrite)")]
    OutputExists(PathBuf),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
