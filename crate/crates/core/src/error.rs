use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by evaluation, sampling and reporting routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at {location}: {detail}")]
    Pole { location: Complex64, detail: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("quadrature did not converge (estimate {estimate}, error {error_estimate}, {evaluations} evaluations)")]
    NonConvergence {
        estimate: Complex64,
        error_estimate: f64,
        evaluations: usize,
    },

    #[error("characteristic function inversion failed: {0}")]
    Inversion(String),

    #[error("numerical mismatch: {0}")]
    Mismatch(String),

    #[error("covariance repair too large: {repaired} of trace {trace}")]
    CovarianceRepair { repaired: f64, trace: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
