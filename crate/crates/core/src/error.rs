//! Error types shared across the crate.

use thiserror::Error;

use crate::geometry::{Point, UnitStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact value (expected integer, decimal, or p/q)")]
pub struct ValueParseError {
    pub input: String,
}

/// Errors raised while constructing or materializing jump systems.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("a jump system must be a nonempty point set")]
    Empty,
    #[error("point {point} has dimension {actual}, expected {expected}")]
    MixedDimensions {
        point: Point,
        expected: usize,
        actual: usize,
    },
    #[error("coordinate {value} exceeds the supported magnitude 10^9")]
    CoordinateOutOfRange { value: i64 },
    #[error("graph has {edges} edges, above the materialization limit {limit}")]
    TooManyEdges { edges: usize, limit: usize },
    #[error("graph edge ({u}, {v}) references a vertex outside 1..={vertices}")]
    EdgeOutOfRange { u: usize, v: usize, vertices: usize },
    #[error("graph must have at least one vertex")]
    NoVertices,
}

/// Errors raised by objective evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error(
        "coordinate {coordinate}: argument {argument} is outside the table domain [{lo}, {hi}]"
    )]
    OutOfDomain {
        coordinate: usize,
        argument: i64,
        lo: i64,
        hi: i64,
    },
}

/// Errors raised by the solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error(transparent)]
    Eval(EvalError),
    #[error("start point {point} is not in the jump system")]
    StartNotInSystem { point: Point },
    #[error("objective is not convex at coordinate {coordinate}, breakpoint {breakpoint}")]
    NotConvex { coordinate: usize, breakpoint: i64 },
    #[error("no descent step exists from {point}: it is locally optimal")]
    LocallyOptimal { point: Point },
}

impl From<EvalError> for SolveError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Dimension(d) => SolveError::Dimension(d),
            other => SolveError::Eval(other),
        }
    }
}

/// Argument errors for the target-region test.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SRegionError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error("steps {s} and {t} cancel: s + t = 0 is not a valid direction")]
    ZeroDirection { s: UnitStep, t: UnitStep },
}

/// Errors raised by instance generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error(transparent)]
    System(#[from] SystemError),
    #[error("parameter {name} = {value} is outside the supported range {limit}")]
    ParamOutOfRange {
        name: &'static str,
        value: usize,
        limit: &'static str,
    },
    #[error("rejection sampling budget of {budget} candidates exhausted")]
    BudgetExhausted { budget: usize },
    #[error("box bounds must satisfy lo <= hi in every coordinate")]
    InvertedBox,
}
