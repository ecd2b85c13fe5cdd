use thiserror::Error;

/// Errors raised by the algebraic and numeric kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid structure constants: {0}")]
    InvalidAlgebra(String),
    #[error("not a complex structure: {0}")]
    InvalidComplexStructure(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate contact form: phi ^ (d phi)^n vanishes")]
    DegenerateContactForm,
    #[error("invalid modification: {0}")]
    InvalidModification(String),
    #[error("point outside chart domain: {0}")]
    OutsideChart(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
