use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis label ({ion}, m={m}, n={n}) lies outside cutoffs m_max={m_max}, n_max={n_max}")]
    OutOfCutoff { ion: char, m: usize, n: usize, m_max: usize, n_max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("truncation overflow: {leak:e} probability would leave the retained Fock space (tolerance {tol:e})")]
    TruncationOverflow { leak: f64, tol: f64 },

    #[error("degenerate matrix element: {0}")]
    DegenerateMatrixElement(String),

    #[error("step control failure: {0}")]
    StepControlFailure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
