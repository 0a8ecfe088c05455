//! Jump-system representations: explicit point sets and graph degree-
//! sequence systems, with the two-step exchange axiom verifier and the
//! Ψ size measure.

use std::collections::HashSet;
use std::fmt;

use crate::error::{DimensionMismatch, SystemError};
use crate::geometry::{inc, Point, UnitStep};

/// Largest coordinate magnitude accepted in instances.
pub const COORD_LIMIT: i64 = 1_000_000_000;

/// Default cap on edge count for graph materialization (2^24 subsets).
pub const DEFAULT_EDGE_LIMIT: usize = 24;

/// Membership-testable integer point set of fixed dimension.
pub trait JumpSystem {
    fn dimension(&self) -> usize;
    fn contains(&self, x: &Point) -> Result<bool, DimensionMismatch>;

    fn check_dim(&self, x: &Point) -> Result<(), DimensionMismatch> {
        if x.dim() == self.dimension() {
            Ok(())
        } else {
            Err(DimensionMismatch {
                left: self.dimension(),
                right: x.dim(),
            })
        }
    }
}

/// A triple (x, y, s) witnessing failure of the exchange axiom: x, y are
/// in the set, s ∈ inc(x, y), x + s is not in the set, and no further
/// step t ∈ inc(x + s, y) lands back in the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JexcCounterexample {
    pub x: Point,
    pub y: Point,
    pub s: UnitStep,
}

impl fmt::Display for JexcCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x={}, y={}, s={})", self.x, self.y, self.s)
    }
}

/// A finite jump-system candidate stored explicitly: a hashed set for
/// membership plus a sorted list for deterministic iteration.
#[derive(Clone, Debug)]
pub struct ExplicitJumpSystem {
    dim: usize,
    points: Vec<Point>,
    index: HashSet<Point>,
    bbox: Vec<(i64, i64)>,
}

impl ExplicitJumpSystem {
    pub fn new(mut points: Vec<Point>) -> Result<Self, SystemError> {
        let dim = points.first().ok_or(SystemError::Empty)?.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(SystemError::MixedDimensions {
                    point: p.clone(),
                    expected: dim,
                    actual: p.dim(),
                });
            }
            if let Some(&c) = p.coords().iter().find(|c| c.abs() > COORD_LIMIT) {
                return Err(SystemError::CoordinateOutOfRange { value: c });
            }
        }
        points.sort();
        points.dedup();
        let mut bbox = vec![(i64::MAX, i64::MIN); dim];
        for p in &points {
            for (i, &c) in p.coords().iter().enumerate() {
                bbox[i].0 = bbox[i].0.min(c);
                bbox[i].1 = bbox[i].1.max(c);
            }
        }
        let index = points.iter().cloned().collect();
        Ok(ExplicitJumpSystem {
            dim,
            points,
            index,
            bbox,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Coordinatewise (min, max) over the point set.
    pub fn bbox(&self) -> &[(i64, i64)] {
        &self.bbox
    }

    /// Ψ(J) = Σ_i (max x(i) − min x(i)): the coordinate-range size measure
    /// bounding the step count of the original greedy algorithm.
    pub fn psi(&self) -> u64 {
        self.bbox.iter().map(|(lo, hi)| hi.abs_diff(*lo)).sum()
    }

    /// Exhaustive check of the exchange axiom over all (x, y, s) with
    /// s ∈ inc(x, y). Scans points in lexicographic order and steps in
    /// canonical order, so the reported counterexample is deterministic.
    pub fn verify_jexc(&self) -> Result<(), JexcCounterexample> {
        for x in &self.points {
            for y in &self.points {
                for s in inc(x, y).expect("equal dims") {
                    let xs = x.step(s);
                    if self.index.contains(&xs) {
                        continue;
                    }
                    let repaired = inc(&xs, y)
                        .expect("equal dims")
                        .into_iter()
                        .any(|t| self.index.contains(&xs.step(t)));
                    if !repaired {
                        return Err(JexcCounterexample {
                            x: x.clone(),
                            y: y.clone(),
                            s,
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

impl JumpSystem for ExplicitJumpSystem {
    fn dimension(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &Point) -> Result<bool, DimensionMismatch> {
        self.check_dim(x)?;
        Ok(self.index.contains(x))
    }
}

/// How much a loop contributes to its endpoint's degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LoopDegree {
    /// Standard convention: a loop counts twice, keeping Σ x(i) = 2|H|.
    #[default]
    CountsTwo,
    /// Experimental convention counting a loop once. The degree sequences
    /// of subgraphs are only claimed to form a jump system under
    /// `CountsTwo`.
    CountsOne,
}

impl LoopDegree {
    fn loop_weight(self) -> i64 {
        match self {
            LoopDegree::CountsTwo => 2,
            LoopDegree::CountsOne => 1,
        }
    }
}

/// The degree-sequence system {x_H : H ⊆ edges} of a multigraph, stored
/// implicitly. Loops and parallel edges are allowed; vertices are
/// 1-based in I/O and 0-based internally.
#[derive(Clone, Debug)]
pub struct GraphDegreeJumpSystem {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    loop_degree: LoopDegree,
}

impl GraphDegreeJumpSystem {
    /// Edges are given with 1-based vertex ids.
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        loop_degree: LoopDegree,
    ) -> Result<Self, SystemError> {
        if vertex_count == 0 {
            return Err(SystemError::NoVertices);
        }
        for &(u, v) in &edges {
            if u == 0 || v == 0 || u > vertex_count || v > vertex_count {
                return Err(SystemError::EdgeOutOfRange {
                    u,
                    v,
                    vertices: vertex_count,
                });
            }
        }
        Ok(GraphDegreeJumpSystem {
            vertex_count,
            edges: edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect(),
            loop_degree,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges with the 1-based vertex ids they were given with.
    pub fn edges_one_based(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (u + 1, v + 1)).collect()
    }

    /// Enumerates all edge subsets and collects the distinct degree
    /// vectors into an explicit system.
    pub fn materialize(&self, edge_limit: usize) -> Result<ExplicitJumpSystem, SystemError> {
        if self.edges.len() > edge_limit {
            return Err(SystemError::TooManyEdges {
                edges: self.edges.len(),
                limit: edge_limit,
            });
        }
        let m = self.edges.len();
        let mut degree = vec![0i64; self.vertex_count];
        let mut seen = HashSet::new();
        seen.insert(Point::new(degree.clone()));
        // Gray-code walk: one edge flips per step.
        let mut members = vec![false; m];
        for k in 1u64..(1u64 << m) {
            let flip = k.trailing_zeros() as usize;
            let delta = if members[flip] { -1 } else { 1 };
            members[flip] = !members[flip];
            let (u, v) = self.edges[flip];
            if u == v {
                degree[u] += delta * self.loop_degree.loop_weight();
            } else {
                degree[u] += delta;
                degree[v] += delta;
            }
            seen.insert(Point::new(degree.clone()));
        }
        ExplicitJumpSystem::new(seen.into_iter().collect())
    }
}

impl JumpSystem for GraphDegreeJumpSystem {
    fn dimension(&self) -> usize {
        self.vertex_count
    }

    /// True iff some edge subset realizes x as its degree vector.
    /// Backtracks over edges with residual-degree and parity pruning.
    fn contains(&self, x: &Point) -> Result<bool, DimensionMismatch> {
        self.check_dim(x)?;
        if x.coords().iter().any(|&c| c < 0) {
            return Ok(false);
        }
        let mut residual: Vec<i64> = x.coords().to_vec();
        // remaining degree capacity per vertex over undecided edges
        let mut capacity = vec![0i64; self.vertex_count];
        for &(u, v) in &self.edges {
            if u == v {
                capacity[u] += self.loop_degree.loop_weight();
            } else {
                capacity[u] += 1;
                capacity[v] += 1;
            }
        }
        if self.loop_degree == LoopDegree::CountsTwo {
            // every subgraph has even total degree
            let total: i64 = residual.iter().sum();
            if total % 2 != 0 {
                return Ok(false);
            }
        }
        Ok(self.search(0, &mut residual, &mut capacity))
    }
}

impl GraphDegreeJumpSystem {
    fn search(&self, edge: usize, residual: &mut [i64], capacity: &mut [i64]) -> bool {
        if residual.iter().any(|&r| r < 0) {
            return false;
        }
        if residual
            .iter()
            .zip(capacity.iter())
            .any(|(&r, &cap)| r > cap)
        {
            return false;
        }
        if edge == self.edges.len() {
            return residual.iter().all(|&r| r == 0);
        }
        let (u, v) = self.edges[edge];
        let w = self.loop_degree.loop_weight();
        // withdraw this edge from the capacity pool
        if u == v {
            capacity[u] -= w;
        } else {
            capacity[u] -= 1;
            capacity[v] -= 1;
        }
        // exclude the edge
        if self.search(edge + 1, residual, capacity) {
            self.restore(u, v, capacity);
            return true;
        }
        // include the edge
        if u == v {
            residual[u] -= w;
        } else {
            residual[u] -= 1;
            residual[v] -= 1;
        }
        let found = self.search(edge + 1, residual, capacity);
        if u == v {
            residual[u] += w;
        } else {
            residual[u] += 1;
            residual[v] += 1;
        }
        self.restore(u, v, capacity);
        found
    }

    fn restore(&self, u: usize, v: usize, capacity: &mut [i64]) {
        if u == v {
            capacity[u] += self.loop_degree.loop_weight();
        } else {
            capacity[u] += 1;
            capacity[v] += 1;
        }
    }
}
