//! Error type shared by all toolkit operations.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two fields on different grids were combined.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// An operation precondition was violated.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A parameter is outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// Adaptive quadrature stopped refining before reaching the tolerance.
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNoConvergence { achieved: f64, requested: f64 },
    /// NaN or unbounded growth detected during time stepping.
    #[error("numerical blow-up: {0}")]
    BlowUp(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed on-disk data (snapshot, index, config).
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
