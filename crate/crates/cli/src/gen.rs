//! Generation of instance documents for corpus building.

use jumpsys_core::generate::{
    box_system, random_convex_table, random_filtered_system, random_multigraph, stream,
};
use jumpsys_core::jump_system::{ExplicitJumpSystem, GraphDegreeJumpSystem, LoopDegree};
use rand::Rng;

use jumpsys_core::delta_matroid::enumerate_delta_matroids;

use crate::instance::subset_to_elements;
use crate::schema::{
    DeltaMatroidDoc, InstanceDoc, JumpSystemDoc, Num, ObjectiveDoc, TermDoc, FORMAT_VERSION,
};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    Linear,
    Quadratic,
    Table,
}

/// A seeded objective document covering the system's bounding box
/// inflated by one.
pub fn random_objective_doc(
    system: &ExplicitJumpSystem,
    kind: ObjectiveKind,
    seed: u64,
) -> ObjectiveDoc {
    let mut rng = stream(seed, 10);
    let terms = system
        .bbox()
        .iter()
        .enumerate()
        .map(|(i, (lo, hi))| match kind {
            ObjectiveKind::Linear => TermDoc::Linear {
                slope: Num::Int(rng.random_range(-4..=4)),
                intercept: None,
            },
            ObjectiveKind::Quadratic => TermDoc::Quadratic {
                weight: Num::Int(rng.random_range(0..=3)),
                center: Num::Int(rng.random_range(*lo..=*hi)),
                offset: None,
            },
            ObjectiveKind::Table => {
                let len = (hi - lo + 3) as usize;
                TermDoc::Table {
                    lo: lo - 1,
                    values: random_convex_table(len, seed.wrapping_add(i as u64))
                        .into_iter()
                        .map(Num::Int)
                        .collect(),
                }
            }
        })
        .collect();
    ObjectiveDoc {
        constant: None,
        terms,
    }
}

fn system_points_doc(system: &ExplicitJumpSystem) -> JumpSystemDoc {
    JumpSystemDoc::Explicit {
        points: system
            .points()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect(),
    }
}

fn instance_from(system: JumpSystemDoc, objective: ObjectiveDoc, start: Vec<i64>) -> InstanceDoc {
    InstanceDoc {
        format_version: FORMAT_VERSION,
        dimension: None,
        jump_system: Some(system),
        objective: Some(objective),
        delta_matroid: None,
        start: Some(start),
    }
}

pub fn box_instance(
    n: usize,
    side: i64,
    kind: ObjectiveKind,
    seed: u64,
) -> Result<InstanceDoc, CliError> {
    let lo = vec![0i64; n];
    let hi = vec![side; n];
    let system = box_system(&lo, &hi).map_err(|e| CliError::Malformed(e.to_string()))?;
    let objective = random_objective_doc(&system, kind, seed);
    let start = system.points()[0].coords().to_vec();
    Ok(instance_from(system_points_doc(&system), objective, start))
}

/// `loop_convention` 1 counts a loop once; the degree sequences are
/// only claimed to form a jump system under the default convention 2.
pub fn graph_instance(
    vertices: usize,
    edges: usize,
    kind: ObjectiveKind,
    seed: u64,
    loop_convention: u8,
) -> Result<InstanceDoc, CliError> {
    let sampled =
        random_multigraph(vertices, edges, seed).map_err(|e| CliError::Malformed(e.to_string()))?;
    let convention = match loop_convention {
        2 => LoopDegree::CountsTwo,
        1 => LoopDegree::CountsOne,
        other => {
            return Err(CliError::Malformed(format!(
                "loop convention must be 1 or 2, got {other}"
            )))
        }
    };
    let graph = GraphDegreeJumpSystem::new(vertices, sampled.edges_one_based(), convention)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let system = graph
        .materialize(jumpsys_core::jump_system::DEFAULT_EDGE_LIMIT)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let objective = random_objective_doc(&system, kind, seed);
    let start = system.points()[0].coords().to_vec();
    let doc = JumpSystemDoc::Graph {
        vertices,
        edges: graph.edges_one_based(),
        loop_convention: (loop_convention != 2).then_some(loop_convention),
    };
    Ok(instance_from(doc, objective, start))
}

pub fn filtered_instance(
    n: usize,
    side: i64,
    points: usize,
    kind: ObjectiveKind,
    seed: u64,
) -> Result<InstanceDoc, CliError> {
    let system = random_filtered_system(n, side, points, seed, 100_000)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let objective = random_objective_doc(&system, kind, seed);
    let start = system.points()[0].coords().to_vec();
    Ok(instance_from(system_points_doc(&system), objective, start))
}

/// Every delta-matroid on {1..n}, as instance documents with zero
/// weights and the first feasible set as start.
pub fn dm_enum_instances(n: usize) -> Result<Vec<InstanceDoc>, CliError> {
    let matroids = enumerate_delta_matroids(n).map_err(|e| CliError::Malformed(e.to_string()))?;
    Ok(matroids
        .into_iter()
        .map(|d| {
            let start = subset_to_elements(d.family()[0], n)
                .into_iter()
                .map(|e| e as i64)
                .collect();
            InstanceDoc {
                format_version: FORMAT_VERSION,
                dimension: None,
                jump_system: None,
                objective: None,
                delta_matroid: Some(DeltaMatroidDoc {
                    ground_size: n,
                    family: d
                        .family()
                        .iter()
                        .map(|&mask| subset_to_elements(mask, n))
                        .collect(),
                    weights: vec![Num::Int(0); n],
                }),
                start: Some(start),
            }
        })
        .collect())
}
