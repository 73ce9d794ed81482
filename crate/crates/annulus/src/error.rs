//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input values (non-finite coordinates, bad parameters, ...).
    #[error("input error: {0}")]
    Input(String),

    /// Structural violation of a file schema (missing point/phase, bad label, ...).
    #[error("schema error: {0}")]
    Schema(String),

    /// Degenerate geometry (collinear points, non-ellipse conic, ...).
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// Numerical failure (singular matrix, non-finite intermediate, ...).
    #[error("numerical error: {0}")]
    Numerical(String),

    /// I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    pub fn degenerate(msg: impl Into<String>) -> Self {
        Error::Degenerate(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
