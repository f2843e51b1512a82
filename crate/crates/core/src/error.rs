use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("dimension mismatch: expected {expected:?}, got {actual:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("point is behind the camera (Z = {0})")]
    BehindCamera(f64),

    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("frame has no valid pixel to fill holes from")]
    Unfillable,

    #[error("no valid pixels to evaluate")]
    EmptyEvaluation,

    #[error("window is not centered on a hole")]
    NotAHole,

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot decode image {path}: {source}")]
    Decode {
        path: PathBuf,
        source: image::ImageError,
    },

    #[error("cannot encode image {path}: {source}")]
    Encode {
        path: PathBuf,
        source: image::ImageError,
    },

    #[error("{path}: expected {expected}, found {found}")]
    BitDepth {
        path: PathBuf,
        expected: &'static str,
        found: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
