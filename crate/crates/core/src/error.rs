use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the correction toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("pixel buffer holds {actual} values but {width}x{height} needs {expected}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },

    #[error("column index {index} out of range for width {width}")]
    ColumnOutOfRange { index: usize, width: usize },

    #[error("quantile {0} outside [0, 1]")]
    QuantileOutOfRange(f64),

    #[error("standard deviation must be finite and non-negative, got {0}")]
    NegativeSigma(f64),

    #[error("expected {expected} histograms for the weight window, got {actual}")]
    WindowMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: {left_width}x{left_height} vs {right_width}x{right_height}")]
    DimensionMismatch {
        left_width: usize,
        left_height: usize,
        right_width: usize,
        right_height: usize,
    },

    #[error("patch is not square: {rows}x{cols}")]
    NonSquarePatch { rows: usize, cols: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-uniformity field has {field} columns but image has {image}")]
    FieldColumnMismatch { field: usize, image: usize },

    #[error("degenerate transfer function for column {0}: map is constant")]
    DegenerateTransfer(usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: malformed PGM: {reason}")]
    MalformedPgm { path: PathBuf, reason: String },

    #[error("{path}: maxval {maxval} exceeds 255; 16-bit PGM input is not supported")]
    SixteenBitPgm { path: PathBuf, maxval: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
