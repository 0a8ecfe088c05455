//! Greedy minimization of separable convex functions on jump systems,
//! linear optimization on delta-matroids, and a brute-force oracle that
//! certifies the geodesic behavior of the algorithms on desk-scale
//! instances.
//!
//! The library is organized around three layers:
//!
//! - representations: integer points and unit steps ([`geometry`]),
//!   explicit and graph-degree jump systems ([`jump_system`]), separable
//!   convex objectives ([`objective`]), and set families under the
//!   symmetric exchange axiom ([`delta_matroid`]);
//! - algorithms: the greedy descent variants ([`solver`]) and the
//!   exchange algorithms for delta-matroids;
//! - verification: exhaustive enumeration-based ground truth and the
//!   property sweeps ([`oracle`]).
//!
//! All objective arithmetic is exact ([`value::Value`]), so strict
//! comparisons carry no tolerance and goldens are reproducible bit for
//! bit.

pub mod delta_matroid;
pub mod error;
pub mod generate;
pub mod geometry;
pub mod jump_system;
pub mod objective;
pub mod oracle;
pub mod solver;
pub mod value;

pub use delta_matroid::{DeltaMatroid, DmProfile, DmTrace, SubsetMask};
pub use error::{DimensionMismatch, EvalError, GenerateError, SolveError, SystemError};
pub use geometry::{Point, StepPair, UnitStep};
pub use jump_system::{
    ExplicitJumpSystem, GraphDegreeJumpSystem, JexcCounterexample, JumpSystem, LoopDegree,
};
pub use objective::{SeparableObjective, UnivariateConvex};
pub use oracle::{GeodesicReport, OptimalityProfile, Violation};
pub use solver::{JscAlgorithm, RunSet, StepRecord, TStarPolicy, TieBreak, Trace};
pub use value::Value;
