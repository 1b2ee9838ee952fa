use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain of a special function or closed form.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter tuple violates one of its invariants.
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// Array or grid dimensions do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// The elliptic problem has no periodic solution for the given data.
    #[error("solvability: {0}")]
    Solvability(String),

    #[error("usage: {0}")]
    Usage(String),

    /// Malformed checkpoint or configuration content.
    #[error("format: {0}")]
    Format(String),

    #[error("internal: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
