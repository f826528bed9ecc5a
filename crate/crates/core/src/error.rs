use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the quadrature pipeline.
#[derive(Debug, Error)]
pub enum QuadError {
    #[error("unsupported kernel order {0}: expected 1..=4 (profile index 0..=3)")]
    UnsupportedOrder(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not positive definite: pivot {index} has value {value:e}")]
    NotPositiveDefinite { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid design: {0}")]
    InvalidDesign(String),

    #[error("weight solve failed for r={r}, n={n}, design={design}: {source}")]
    WeightSolve {
        r: u8,
        n: usize,
        design: String,
        #[source]
        source: Box<QuadError>,
    },

    #[error(
        "numerical breakdown: squared worst-case error {raw_square:e} is below \
         the tolerated floor {limit:e}"
    )]
    NumericalBreakdown { raw_square: f64, limit: f64 },

    #[error("rate guarantee void: {0}")]
    GuaranteeVoid(String),

    #[error("rate fit unavailable: {usable} usable points (need at least 3)")]
    FitUnavailable { usable: usize },

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed rows file: {0}")]
    Rows(String),
}

pub type Result<T> = std::result::Result<T, QuadError>;

impl QuadError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QuadError::Io {
            path: path.into(),
            source,
        }
    }
}
