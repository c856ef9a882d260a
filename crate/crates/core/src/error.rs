use thiserror::Error;

/// Errors shared across the evaluation, operator and sampling layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series did not converge: {0}")]
    NonConvergent(String),

    #[error("adaptive quadrature failed: {0}")]
    Quadrature(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("right tail of the operand is not negligible: {0}")]
    Tail(String),

    #[error("invalid specification: {0}")]
    Spec(String),

    #[error("path did not exit within the horizon: {0}")]
    Horizon(String),
}

pub type Result<T> = std::result::Result<T, Error>;
