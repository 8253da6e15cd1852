use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("truncation mismatch: K={left} vs K={right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("grid of {grid} points per axis cannot hold truncation K={k_max} (need at least {required})")]
    GridTooSmall {
        grid: usize,
        k_max: usize,
        required: usize,
    },

    #[error("mean vorticity {0:e} is nonzero; the inversion is ill-posed on the torus")]
    NonzeroMeanVorticity(f64),

    #[error("numerical failure at t={t}: {reason}")]
    Numerical { t: f64, reason: String },

    #[error("time {t} outside stored trajectory [{start}, {end}]")]
    OutsideTrajectory { t: f64, start: f64, end: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("bad checkpoint: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
