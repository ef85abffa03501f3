//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partitions have different sums: {0} vs {1}")]
    SumMismatch(usize, usize),

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("matchings live on different vertex sets ({0} vs {1} vertices)")]
    VertexSetMismatch(usize, usize),

    #[error("partition is not equitable for the class: cell {cell}, members {a} and {b} disagree")]
    NotEquitable { cell: usize, a: usize, b: usize },

    #[error("eigenvalue extraction ambiguous in quotient {quotient}: {reason}")]
    Extraction { quotient: String, reason: String },

    #[error("verification failure: {0}")]
    Verification(String),

    #[error("linear system is singular")]
    SingularSystem,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache file has format version {found}, expected {expected}")]
    FormatVersion { found: u32, expected: u32 },

    #[error("cache file checksum mismatch")]
    Checksum,

    #[error("usage error: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
