use crate::prelude::*;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("polygon is clockwise (signed area {0:e}); normalize orientation first")]
    Orientation(f64),

    #[error("mesh has no elements")]
    EmptyMesh,

    #[error("empty input vector")]
    EmptyInput,

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("mesh generation failed for polygon {polygon}: {reason}")]
    Generation { polygon: usize, reason: String },

    #[error("element {element}: projector matrix is singular (condition estimate {cond:e})")]
    ElementConditioning { element: usize, cond: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("conjugate gradient did not converge in {iterations} iterations (relative residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        history: Vec<f64>,
    },

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}
