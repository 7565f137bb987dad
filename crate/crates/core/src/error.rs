use thiserror::Error;

/// Errors raised by the geometry kernel, the closed-form formulas, the
/// optimizers and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate simplex: |det| = {det:e} below guard {guard:e}")]
    DegenerateSimplex { det: f64, guard: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is not interior: weight {index} = {weight:e} is below the boundary margin")]
    NotInterior { index: usize, weight: f64 },

    #[error("index {index} out of range for {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unsupported dimension n = {0}")]
    UnsupportedDimension(usize),

    #[error("continued-fraction depth must be at least 1")]
    NonPositiveDepth,

    #[error("x = {x} outside the open interval (0, 1/{n})")]
    OutOfDomain { x: f64, n: usize },

    #[error("optimizer did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("sampling failed after {0} consecutive rejections")]
    SamplingFailure(usize),

    #[error("invalid trial plan: {0}")]
    InvalidPlan(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
