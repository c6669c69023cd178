//! Crate-wide error type. Parse errors carry 1-based line numbers; the
//! caller supplies file context.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid date range: {from} is after {to}")]
    DateRange { from: String, to: String },

    #[error("dictionary collision: {term:?} maps to both {first:?} and {second:?}")]
    Collision {
        term: String,
        first: String,
        second: String,
    },

    #[error("dimension mismatch: vector index {index} outside model dimension {dim}")]
    Dimension { index: usize, dim: usize },

    #[error("training diverged at epoch {epoch}: {what}")]
    Divergence { epoch: usize, what: String },

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
