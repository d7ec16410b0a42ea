use thiserror::Error;

/// Errors produced by grid construction, operator evaluation and the
/// verification routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval: require a < b, got a = {a}, b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("grid needs at least 2 subintervals, got {n}")]
    TooFewSubintervals { n: usize },

    #[error("refinement factor must be >= 2, got {factor}")]
    RefinementFactor { factor: usize },

    #[error("non-finite sample {value} at node {index}")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("non-finite sample {value} at node {indices:?}")]
    NonFiniteFieldSample { indices: Vec<usize>, value: f64 },

    #[error("value count {got} does not match grid node count {expected}")]
    ValueCount { expected: usize, got: usize },

    #[error("fractional order {mu} outside {range} for {operator}")]
    OrderRange {
        mu: f64,
        range: &'static str,
        operator: &'static str,
    },

    #[error("fractional order must be finite and >= 0, got {mu}")]
    InvalidOrder { mu: f64 },

    #[error("gamma pole at non-positive integer z = {z}")]
    GammaPole { z: f64 },

    #[error("axis {axis} out of range for rank-{rank} grid")]
    AxisOutOfRange { axis: usize, rank: usize },

    #[error("operands live on different grids")]
    DomainMismatch,

    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    #[error("grid too coarse: operator of order {mu} needs at least {needed} subintervals, got {got}")]
    GridTooCoarse { mu: f64, needed: usize, got: usize },

    #[error("non-finite value at interior node while applying {operator} along axis {axis}")]
    NonFiniteInterior { operator: &'static str, axis: usize },

    #[error("operator has no terms")]
    EmptyOperator,

    #[error("classical identity check requires all Lagrangian orders equal to 1")]
    OrdersNotClassical,
}

pub type Result<T> = std::result::Result<T, Error>;
