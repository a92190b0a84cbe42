use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("kernel variant {variant} is not available for s+1 = {dim}: {requirement}")]
    DimensionParity {
        variant: &'static str,
        dim: usize,
        requirement: &'static str,
    },
    #[error("kernel value vanishes at (k, l) = ({k}, {l})")]
    KernelZero { k: usize, l: usize },
    #[error("invalid kernel table: {0}")]
    InvalidKernel(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resonant denominator 2 mu0 B3 - hbar omega vanishes while a = {a} differs from 1")]
    ResonantDenominator { a: f64 },
    #[error("step too large: dt * Omega = {0} exceeds 0.5")]
    StepTooLarge(f64),
}
