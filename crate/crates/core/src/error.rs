use std::io;

use thiserror::Error;

/// Errors produced by the solvers, generators and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// Inputs whose shapes disagree (weight vector vs. graph, bad edge list).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation evaluated outside its domain (empty set, zero bound).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of an algorithm does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Exhaustive enumeration refused for a graph that is too large.
    #[error("graph has {n} vertices; exhaustive search is limited to {limit}")]
    TooLarge { n: usize, limit: usize },

    /// A per-edge sample count exceeds the configured cap.
    #[error("edge {edge} needs {required} samples, above the cap of {cap}")]
    BudgetExceeded { edge: usize, required: f64, cap: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
