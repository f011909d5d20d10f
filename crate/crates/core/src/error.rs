//! Error type shared by the pipeline crates.

use thiserror::Error;

/// Unified error for all pipeline operations.
#[derive(Debug, Error)]
pub enum Error {
    /// Array shapes are incompatible (mismatched images, non-2-D files, ...).
    #[error("shape error: {0}")]
    Shape(String),

    /// A file is not in the expected on-disk format.
    #[error("format error: {0}")]
    Format(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A normalization divisor collapsed to zero.
    #[error("degenerate scale: {0}")]
    DegenerateScale(String),

    /// Input value outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A region that must contain pixels is empty.
    #[error("empty region: {0}")]
    EmptyRegion(String),

    /// Invalid configuration or argument value.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Geometry cannot be realized (shapes too small, rectangles outside, ...).
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Not enough data to run the operation.
    #[error("data error: {0}")]
    Data(String),

    /// Non-finite values or a diverging iteration.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A feature that was searched for is not present.
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
