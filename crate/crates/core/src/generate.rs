//! Seeded generators for the verification corpus: integer boxes, random
//! multigraph degree systems, and rejection-sampled explicit systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenerateError;
use crate::geometry::Point;
use crate::jump_system::{ExplicitJumpSystem, GraphDegreeJumpSystem, LoopDegree};

/// Desk-scale parameter limits for the generators.
pub const MAX_DIM: usize = 5;
pub const MAX_BOX_SIDE: i64 = 6;
pub const MAX_EDGES: usize = 12;

/// One deterministic stream per (seed, label), so corpus entries are
/// reproducible independently of generation order.
pub fn stream(seed: u64, label: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label);
    rng
}

/// The integer box Π [lo(i), hi(i)]. Boxes always satisfy the exchange
/// axiom, so this needs no filtering.
pub fn box_system(lo: &[i64], hi: &[i64]) -> Result<ExplicitJumpSystem, GenerateError> {
    if lo.len() != hi.len() || lo.is_empty() {
        return Err(GenerateError::InvertedBox);
    }
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return Err(GenerateError::InvertedBox);
    }
    if lo.len() > MAX_DIM {
        return Err(GenerateError::ParamOutOfRange {
            name: "dimension",
            value: lo.len(),
            limit: "n <= 5",
        });
    }
    if lo.iter().zip(hi).any(|(a, b)| b - a > MAX_BOX_SIDE) {
        return Err(GenerateError::ParamOutOfRange {
            name: "side",
            value: (hi[0] - lo[0]) as usize,
            limit: "side <= 6",
        });
    }
    let mut points = vec![Point::zero(0)];
    for (a, b) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &points {
            for c in *a..=*b {
                let mut coords = p.coords().to_vec();
                coords.push(c);
                next.push(Point::new(coords));
            }
        }
        points = next;
    }
    Ok(ExplicitJumpSystem::new(points)?)
}

/// A random multigraph (loops and parallel edges allowed) materialized
/// into its degree-sequence system.
pub fn random_graph_system(
    vertices: usize,
    edges: usize,
    seed: u64,
) -> Result<ExplicitJumpSystem, GenerateError> {
    let graph = random_multigraph(vertices, edges, seed)?;
    Ok(graph.materialize(MAX_EDGES * 2)?)
}

/// The underlying random multigraph, for callers that want the graph
/// representation itself.
pub fn random_multigraph(
    vertices: usize,
    edges: usize,
    seed: u64,
) -> Result<GraphDegreeJumpSystem, GenerateError> {
    if vertices == 0 || vertices > MAX_DIM {
        return Err(GenerateError::ParamOutOfRange {
            name: "vertices",
            value: vertices,
            limit: "1 <= n <= 5",
        });
    }
    if edges > MAX_EDGES {
        return Err(GenerateError::ParamOutOfRange {
            name: "edges",
            value: edges,
            limit: "edges <= 12",
        });
    }
    let mut rng = stream(seed, 1);
    let edge_list: Vec<(usize, usize)> = (0..edges)
        .map(|_| {
            (
                rng.random_range(1..=vertices),
                rng.random_range(1..=vertices),
            )
        })
        .collect();
    Ok(GraphDegreeJumpSystem::new(
        vertices,
        edge_list,
        LoopDegree::CountsTwo,
    )?)
}

/// Rejection-samples random point sets inside a small box until one
/// passes the exchange-axiom verifier.
pub fn random_filtered_system(
    dim: usize,
    side: i64,
    points: usize,
    seed: u64,
    budget: usize,
) -> Result<ExplicitJumpSystem, GenerateError> {
    if dim == 0 || dim > MAX_DIM {
        return Err(GenerateError::ParamOutOfRange {
            name: "dimension",
            value: dim,
            limit: "1 <= n <= 5",
        });
    }
    if !(0..=MAX_BOX_SIDE).contains(&side) {
        return Err(GenerateError::ParamOutOfRange {
            name: "side",
            value: side.max(0) as usize,
            limit: "0 <= side <= 6",
        });
    }
    let mut rng = stream(seed, 2);
    for _ in 0..budget {
        let sample: Vec<Point> = (0..points.max(1))
            .map(|_| Point::new((0..dim).map(|_| rng.random_range(0..=side)).collect()))
            .collect();
        let system = ExplicitJumpSystem::new(sample)?;
        if system.verify_jexc().is_ok() {
            return Ok(system);
        }
    }
    Err(GenerateError::BudgetExhausted { budget })
}

/// Random convex table values for corpus building: second differences are
/// drawn nonnegative, so discrete convexity holds by construction.
pub fn random_convex_table(len: usize, seed: u64) -> Vec<i64> {
    let mut rng = stream(seed, 3);
    let mut first_diff: i64 = rng.random_range(-5..=5);
    let mut value: i64 = rng.random_range(-10..=10);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(value);
        value += first_diff;
        first_diff += rng.random_range(0..=3);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_box() {
        let b = box_system(&[0, 0], &[1, 1]).unwrap();
        assert_eq!(b.len(), 4);
        assert!(b.verify_jexc().is_ok());
    }

    #[test]
    fn graph_systems_are_jump_systems() {
        for seed in 0..10 {
            let sys = random_graph_system(4, 7, seed).unwrap();
            assert!(sys.verify_jexc().is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn filtered_systems_pass_axiom_by_construction() {
        for seed in 0..10 {
            let sys = random_filtered_system(2, 3, 6, seed, 10_000).unwrap();
            assert!(sys.verify_jexc().is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn generators_are_deterministic_per_seed() {
        let a = random_graph_system(4, 6, 42).unwrap();
        let b = random_graph_system(4, 6, 42).unwrap();
        assert_eq!(a.points(), b.points());
        let c = random_filtered_system(3, 2, 5, 7, 10_000).unwrap();
        let d = random_filtered_system(3, 2, 5, 7, 10_000).unwrap();
        assert_eq!(c.points(), d.points());
    }

    #[test]
    fn convex_tables_are_convex() {
        for seed in 0..20 {
            let v = random_convex_table(9, seed);
            for k in 1..v.len() - 1 {
                assert!(v[k - 1] + v[k + 1] >= 2 * v[k], "seed {seed}");
            }
        }
    }
}
