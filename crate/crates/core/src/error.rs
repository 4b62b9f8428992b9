use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("point {0} is a pole of the field")]
    Pole(String),
    #[error("point {0} lies on a branch cut")]
    BranchCut(String),
    #[error("derivative order {requested} unsupported (max {max})")]
    OrderUnsupported { requested: usize, max: usize },
    #[error("field is not SO(3)-symmetric: {0}")]
    NotSymmetric(String),
    #[error("reduction undefined on the symmetry axis r = 0")]
    Axis,
    #[error("gauge transformation is singular at this point (|g| = {0:e})")]
    SingularGauge(f64),
    #[error("degenerate gauge: e^(2iχ) = 1 at this point")]
    DegenerateGauge,
    #[error("quadrature did not converge: value {value}, error estimate {error:e}")]
    QuadratureNotConverged { value: f64, error: f64 },
    #[error("form component has real part {0:e}; connection forms must be imaginary")]
    NotImaginary(f64),
    #[error("point outside the model domain: {0}")]
    OutsideDomain(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("root finding did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
