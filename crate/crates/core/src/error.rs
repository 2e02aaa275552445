use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty space: the mesh has no free degrees of freedom")]
    EmptySpace,

    #[error("mesh mismatch: function lives on mesh {found}, expected a function on mesh {expected}")]
    MeshMismatch { expected: u64, found: u64 },

    #[error("degenerate triangle {0}")]
    DegenerateTriangle(usize),

    #[error("point ({0}, {1}) lies outside the mesh")]
    PointOutside(f64, f64),

    #[error("non-conforming mesh: {0}")]
    NonConforming(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("the problem has no exact solution")]
    MissingExactSolution,

    #[error("evaluation at the singular point ({0}, {1})")]
    SingularPoint(f64, f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("growth condition violated for s = {s}, t = {t}: divided difference {ratio}")]
    GrowthViolation { s: f64, t: f64, ratio: f64 },

    #[error("matrix is not positive definite ({0})")]
    NotPositiveDefinite(String),

    #[error("conjugate gradients did not converge: {iterations} iterations, relative residual {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least 3 points are required for a rate fit, got {0}")]
    TooFewPoints(usize),

    #[error("fixed-point iteration did not reach {tol:e} within {iterations} steps (last update norm {last:e})")]
    IterationCap { iterations: usize, tol: f64, last: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
