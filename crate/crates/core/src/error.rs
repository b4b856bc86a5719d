use thiserror::Error;

/// Errors raised by geometric operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("discrete convexity violated at sample {index} (edge length {value:e})")]
    ConvexityViolation { index: usize, value: f64 },

    #[error("curvature function is not positive (min {min:e})")]
    NonConvex { min: f64 },

    #[error("origin is not an interior point of the body")]
    OriginNotInterior,

    #[error("affine map is singular (det = {0:e})")]
    SingularMap(f64),

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("body is not origin-symmetric (defect {0:e})")]
    NotSymmetric(f64),

    #[error("curvature data has a first harmonic of relative size {0:e}")]
    SolvabilityViolation(f64),

    #[error("Minkowski solution fails discrete convexity: {0}")]
    NonConvexSolution(String),

    #[error("spectral tail above the resolved band carries {0:e} of the energy")]
    SpectralTail(f64),

    #[error("Santalo point of the symmetral is {0:e} away from the axis")]
    OffAxisSantaloPoint(f64),

    #[error("cannot bring body into John position: {0}")]
    NotJohnNormalizable(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
