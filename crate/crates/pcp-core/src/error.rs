//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    DimensionMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("matrix entries must be finite (found {value} at row {row}, col {col})")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },

    #[error("invalid matrix shape: {0}")]
    InvalidShape(String),

    #[error("invalid mask: {0}")]
    InvalidMask(String),

    #[error("SVD backend failed to converge within its iteration budget")]
    SvdNonConvergence,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("theta search failed: {0}")]
    ThetaSearchFailure(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("unsupported format version {found} (expected {expected})")]
    FormatVersion { expected: u16, found: u16 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("manifest error: {0}")]
    Manifest(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
