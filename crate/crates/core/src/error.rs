use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("aliasing: cutoff {cutoff} must be below N/2 = {half}")]
    Aliasing { cutoff: usize, half: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("gamma function pole at {0}")]
    Pole(f64),

    #[error("accuracy target not met for {what} (error estimate {estimate:e})")]
    Accuracy { what: String, estimate: f64 },

    #[error("Hermitian symmetry violated: imaginary residue {0:e}")]
    Symmetry(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
