use thiserror::Error;

/// Errors raised by cloud construction, invariant computation and the solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cloud must contain at least one point")]
    EmptyCloud,

    #[error("point {index} has dimension {found}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("expected {expected} weights, got {found}")]
    WeightCount { expected: usize, found: usize },

    #[error("weight {index} is negative or not finite: {value}")]
    InvalidWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("operation requires explicit point weights")]
    MissingWeights,

    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("entry ({i},{j}) is negative or not finite: {value}")]
    InvalidDistance { i: usize, j: usize, value: f64 },

    #[error("diagonal entry ({i},{i}) is {value}, expected 0")]
    NonzeroDiagonal { i: usize, value: f64 },

    #[error("matrix is asymmetric at ({i},{j}): {upper} vs {lower}")]
    Asymmetric {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
    },

    #[error("triangle inequality fails for ({i},{j},{k}): d({i},{k}) exceeds d({i},{j})+d({j},{k}) by {excess}")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        excess: f64,
    },

    #[error("index {index} out of range for a cloud of {m} points")]
    IndexOutOfRange { index: usize, m: usize },

    #[error("basis contains index {0} more than once")]
    DuplicateIndex(usize),

    #[error("basis size h={h} is invalid for a cloud of m={m} points")]
    BasisSize { h: usize, m: usize },

    #[error("basis size h={h} exceeds the configured cap {cap}")]
    BasisCap { h: usize, cap: usize },

    #[error("matrix is not orthogonal (max deviation {deviation})")]
    NotOrthogonal { deviation: f64 },

    #[error("operation requires a coordinate cloud, got a distance matrix")]
    RequiresCoordinates,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("coordinate {coordinate} has zero standard deviation; standardized moment of order {order} is undefined")]
    DegenerateMoment { coordinate: usize, order: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
