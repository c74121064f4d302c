//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input violates a domain precondition (non-positive length, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Grids that must share geometry do not.
    #[error("shape error: {0}")]
    Shape(String),

    /// Resampling between incompatible grids (non-integer ratio, too small).
    #[error("resampling error: {0}")]
    Resample(String),

    /// Pattern analysis failed (no resolvable fringes, ...).
    #[error("analysis error: {0}")]
    Analysis(String),

    /// A numerical procedure did not converge or produced non-finite values.
    #[error("numerical error: {0}")]
    Numerics(String),

    /// Configuration parsing or validation failure.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line front end:
    /// 1 for configuration problems, 2 for numerical/analysis failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
