use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = WalkError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("boundary overflow at step {step}: amplitude {magnitude:.3e} would leave the lattice through site {site}")]
    BoundaryOverflow { step: usize, site: usize, magnitude: f64 },

    #[error("degenerate distribution: sum of squared probabilities is {0:.3e}")]
    DegenerateDistribution(f64),

    #[error("insufficient data: need {needed} records, have {available}")]
    InsufficientData { needed: usize, available: usize },

    #[error("no transition: sp_bar >= {threshold} is constant over phi in [0, pi/2) for chi = {chi}")]
    NoTransition { chi: f64, threshold: f64 },

    #[error("cell (chi = {chi}, phi = {phi}): {source}")]
    Cell {
        chi: f64,
        phi: f64,
        #[source]
        source: Box<WalkError>,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl WalkError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        WalkError::Io { path: path.into(), source }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            WalkError::Usage(_) => 2,
            _ => 3,
        }
    }
}
