use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid type label: {0}")]
    InvalidLabel(String),

    #[error("argument {0} outside the domain [0, 1]")]
    Domain(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{what}: value {value} out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("trajectory too short: need {needed} slices, have {have}")]
    TrajectoryTooShort { needed: usize, have: usize },

    #[error("node index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("c-vector {0} is not sign-coherent")]
    SignIncoherent(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
