//! Crate-wide error type and the CLI exit-code mapping.

use std::path::PathBuf;

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Two grids (or grid stacks) that must share dimensions do not.
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    /// Inverse DFT asked for a real result but the spectrum was not
    /// conjugate-symmetric.
    #[error("inverse DFT input not conjugate-symmetric: imaginary residue {residue:.3e} exceeds tolerance {tolerance:.3e}")]
    SymmetryViolation { residue: f64, tolerance: f64 },

    /// A sampling region or target box with (near-)zero area.
    #[error("empty region: {0}")]
    EmptyRegion(String),

    /// Patch dimensions are not divisible by the feature cell size.
    #[error("patch {width}x{height} not divisible by cell size {cell}")]
    DimNotDivisible {
        width: usize,
        height: usize,
        cell: usize,
    },

    /// The filter subproblem is singular because mu + gamma = 0.
    #[error("degenerate regularization: mu + gamma must be positive")]
    DegenerateRegularization,

    /// Problem exceeds the brute-force oracle's size guard.
    #[error("problem too large for brute-force oracle: D*M*N = {size} exceeds {limit}")]
    TooLarge { size: usize, limit: usize },

    /// A bounding box with non-positive width or height where a valid one
    /// is required.
    #[error("degenerate bounding box: {0}")]
    DegenerateBox(String),

    /// Sequence directory has no ground-truth annotation file.
    #[error("missing ground truth file {0}")]
    MissingGroundTruth(PathBuf),

    /// Frame count and ground-truth line count disagree.
    #[error("{dir}: {frames} frames but {truths} ground-truth lines")]
    FrameCountMismatch {
        dir: PathBuf,
        frames: usize,
        truths: usize,
    },

    /// A text input (ground truth, config) failed to parse.
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Invalid configuration key or value.
    #[error("config error: {0}")]
    Config(String),

    /// An aggregate over an empty collection.
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    /// Corrupt or incompatible tracker snapshot.
    #[error("bad snapshot: {0}")]
    Snapshot(String),

    /// Image decode failure.
    #[error("failed to decode {path}: {source}")]
    ImageDecode {
        path: PathBuf,
        source: image::ImageError,
    },

    /// Filesystem failure with the path that caused it.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 2 for I/O trouble, 3 for config
    /// trouble, 4 for internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::MissingGroundTruth(_)
            | Error::FrameCountMismatch { .. }
            | Error::Parse { .. }
            | Error::ImageDecode { .. }
            | Error::EmptyInput(_)
            | Error::Snapshot(_)
            | Error::Io { .. } => 2,
            Error::Config(_) => 3,
            Error::DimMismatch(_)
            | Error::SymmetryViolation { .. }
            | Error::EmptyRegion(_)
            | Error::DimNotDivisible { .. }
            | Error::DegenerateRegularization
            | Error::TooLarge { .. }
            | Error::DegenerateBox(_) => 4,
        }
    }
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
