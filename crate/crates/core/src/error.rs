use alloc::string::String;

/// Errors raised by grid construction, operators, quadrature and the solver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid grid size {0}: must be a power of two and at least 8")]
    InvalidSize(usize),
    #[error("invalid domain: half-length must be positive, got {0}")]
    InvalidDomain(f64),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("offset must be nonzero")]
    ZeroOffset,
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e})")]
    QuadratureNonconvergence { tol: f64, estimate: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cost limit exceeded: N = {0}")]
    CostLimit(usize),
}

pub type Result<T> = core::result::Result<T, Error>;
