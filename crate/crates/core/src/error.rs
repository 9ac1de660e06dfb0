use thiserror::Error;

/// Errors raised by the evaluation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate roots: |z{i} - z{j}| = {distance:e} is below the tolerance")]
    DegenerateRoots { i: usize, j: usize, distance: f64 },

    #[error("ill-conditioned evaluation at t = {t}: {what}")]
    Conditioning { t: f64, what: String },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("kernel diverges at {0}")]
    Divergent(String),

    #[error("alpha = {alpha} collides with the pole {pole}")]
    PoleCollision { alpha: String, pole: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("inconsistent parameters: {0}")]
    Inconsistent(String),

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
