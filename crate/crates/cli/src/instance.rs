//! Instance loading: parse, structural validation, conversion to core
//! types, and the canonical digest traces refer to.

use sha2::{Digest, Sha256};

use jumpsys_core::delta_matroid::{DeltaMatroid, SubsetMask};
use jumpsys_core::geometry::Point;
use jumpsys_core::jump_system::{
    ExplicitJumpSystem, GraphDegreeJumpSystem, JumpSystem, LoopDegree, DEFAULT_EDGE_LIMIT,
};
use jumpsys_core::objective::{SeparableObjective, UnivariateConvex};
use jumpsys_core::value::Value;

use crate::schema::{
    DeltaMatroidDoc, InstanceDoc, JumpSystemDoc, Num, ObjectiveDoc, TermDoc, FORMAT_VERSION,
};
use crate::CliError;

/// A structurally valid jump-system instance. Graph systems keep both
/// the graph and its materialization.
pub struct JscInstance {
    pub digest: String,
    pub system: ExplicitJumpSystem,
    pub graph: Option<GraphDegreeJumpSystem>,
    pub objective: SeparableObjective,
    pub start: Option<Point>,
}

/// A structurally valid weighted delta-matroid instance.
pub struct DmInstance {
    pub digest: String,
    pub matroid: DeltaMatroid,
    pub weights: Vec<Value>,
    pub start: Option<SubsetMask>,
}

pub enum LoadedInstance {
    Jsc(Box<JscInstance>),
    Dm(DmInstance),
}

impl LoadedInstance {
    pub fn digest(&self) -> &str {
        match self {
            LoadedInstance::Jsc(i) => &i.digest,
            LoadedInstance::Dm(i) => &i.digest,
        }
    }
}

/// Normalizes number encodings so the digest does not depend on whether
/// an integer was written as `6` or `"6"`.
fn normalize_num(n: &Num) -> Result<Num, CliError> {
    Ok(Num::from_value(n.to_value()?))
}

fn normalize_doc(doc: &InstanceDoc) -> Result<InstanceDoc, CliError> {
    let mut doc = doc.clone();
    if let Some(objective) = &mut doc.objective {
        if let Some(c) = &objective.constant {
            objective.constant = Some(normalize_num(c)?);
        }
        for term in &mut objective.terms {
            match term {
                TermDoc::Linear { slope, intercept } => {
                    *slope = normalize_num(slope)?;
                    if let Some(b) = intercept {
                        *intercept = Some(normalize_num(b)?);
                    }
                }
                TermDoc::Quadratic {
                    weight,
                    center,
                    offset,
                } => {
                    *weight = normalize_num(weight)?;
                    *center = normalize_num(center)?;
                    if let Some(b) = offset {
                        *offset = Some(normalize_num(b)?);
                    }
                }
                TermDoc::Table { values, .. } => {
                    for v in values {
                        *v = normalize_num(v)?;
                    }
                }
            }
        }
    }
    if let Some(dm) = &mut doc.delta_matroid {
        for w in &mut dm.weights {
            *w = normalize_num(w)?;
        }
    }
    Ok(doc)
}

/// Digest of the normalized instance document.
pub fn instance_digest(doc: &InstanceDoc) -> Result<String, CliError> {
    let canonical = serde_json::to_string(&normalize_doc(doc)?)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let hash = Sha256::digest(canonical.as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    Ok(format!("sha256:{hex}"))
}

pub fn parse_doc(text: &str) -> Result<InstanceDoc, CliError> {
    let doc: InstanceDoc =
        serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(CliError::Malformed(format!(
            "unsupported format_version {}",
            doc.format_version
        )));
    }
    Ok(doc)
}

fn build_objective(doc: &ObjectiveDoc) -> Result<SeparableObjective, CliError> {
    let mut terms = Vec::with_capacity(doc.terms.len());
    for term in &doc.terms {
        terms.push(match term {
            TermDoc::Linear { slope, intercept } => UnivariateConvex::Linear {
                slope: slope.to_value()?,
                intercept: intercept
                    .as_ref()
                    .map(Num::to_value)
                    .transpose()?
                    .unwrap_or(Value::ZERO),
            },
            TermDoc::Quadratic {
                weight,
                center,
                offset,
            } => UnivariateConvex::Quadratic {
                weight: weight.to_value()?,
                center: center.to_value()?,
                offset: offset
                    .as_ref()
                    .map(Num::to_value)
                    .transpose()?
                    .unwrap_or(Value::ZERO),
            },
            TermDoc::Table { lo, values } => UnivariateConvex::Table {
                lo: *lo,
                values: values
                    .iter()
                    .map(Num::to_value)
                    .collect::<Result<Vec<_>, _>>()?,
            },
        });
    }
    let constant = doc
        .constant
        .as_ref()
        .map(Num::to_value)
        .transpose()?
        .unwrap_or(Value::ZERO);
    Ok(SeparableObjective::new(terms, constant))
}

pub fn subset_from_elements(
    elements: &[usize],
    ground_size: usize,
) -> Result<SubsetMask, CliError> {
    let mut mask: SubsetMask = 0;
    for &e in elements {
        if e == 0 || e > ground_size {
            return Err(CliError::Malformed(format!(
                "element {e} is outside the ground set 1..={ground_size}"
            )));
        }
        mask |= 1 << (e - 1);
    }
    Ok(mask)
}

pub fn subset_to_elements(mask: SubsetMask, ground_size: usize) -> Vec<usize> {
    (0..ground_size)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| i + 1)
        .collect()
}

fn build_delta_matroid(doc: &DeltaMatroidDoc) -> Result<DmInstance, CliError> {
    let family = doc
        .family
        .iter()
        .map(|set| subset_from_elements(set, doc.ground_size))
        .collect::<Result<Vec<_>, _>>()?;
    let matroid = DeltaMatroid::new(doc.ground_size, family)
        .map_err(|e| CliError::Malformed(e.to_string()))?;
    let weights = doc
        .weights
        .iter()
        .map(Num::to_value)
        .collect::<Result<Vec<_>, _>>()?;
    if weights.len() != doc.ground_size {
        return Err(CliError::Malformed(format!(
            "{} weights for a ground set of {}",
            weights.len(),
            doc.ground_size
        )));
    }
    Ok(DmInstance {
        digest: String::new(),
        matroid,
        weights,
        start: None,
    })
}

/// Structural load: shapes, dimensions, domain coverage, start
/// membership. Property checks (exchange axioms, convexity) are the
/// `validate` command's job and are not an error here.
pub fn load_instance(text: &str) -> Result<LoadedInstance, CliError> {
    let doc = parse_doc(text)?;
    let digest = instance_digest(&doc)?;
    match (&doc.jump_system, &doc.delta_matroid) {
        (Some(_), Some(_)) => Err(CliError::Malformed(
            "instance declares both a jump system and a delta-matroid".into(),
        )),
        (None, None) => Err(CliError::Malformed(
            "instance declares neither a jump system nor a delta-matroid".into(),
        )),
        (Some(js), None) => {
            let objective_doc = doc.objective.as_ref().ok_or_else(|| {
                CliError::Malformed("jump-system instance needs an objective".into())
            })?;
            let (system, graph) = match js {
                JumpSystemDoc::Explicit { points } => {
                    let pts: Vec<Point> = points.iter().map(|c| Point::new(c.clone())).collect();
                    let system = ExplicitJumpSystem::new(pts)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    (system, None)
                }
                JumpSystemDoc::Graph {
                    vertices,
                    edges,
                    loop_convention,
                } => {
                    let convention = match loop_convention.unwrap_or(2) {
                        2 => LoopDegree::CountsTwo,
                        1 => LoopDegree::CountsOne,
                        other => {
                            return Err(CliError::Malformed(format!(
                                "loop_convention must be 1 or 2, got {other}"
                            )))
                        }
                    };
                    let graph = GraphDegreeJumpSystem::new(*vertices, edges.clone(), convention)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    let system = graph
                        .materialize(DEFAULT_EDGE_LIMIT)
                        .map_err(|e| CliError::Malformed(e.to_string()))?;
                    (system, Some(graph))
                }
            };
            if let Some(d) = doc.dimension {
                if d != system.dimension() {
                    return Err(CliError::Malformed(format!(
                        "declared dimension {d} but the system has dimension {}",
                        system.dimension()
                    )));
                }
            }
            let objective = build_objective(objective_doc)?;
            if objective.dim() != system.dimension() {
                return Err(CliError::Malformed(format!(
                    "{} objective terms for dimension {}",
                    objective.dim(),
                    system.dimension()
                )));
            }
            // the solvers evaluate f(x + s) one step outside the system
            let lo: Vec<i64> = system.bbox().iter().map(|(a, _)| a - 1).collect();
            let hi: Vec<i64> = system.bbox().iter().map(|(_, b)| b + 1).collect();
            if !objective.covers(&lo, &hi) {
                return Err(CliError::Malformed(
                    "objective tables do not cover the bounding box inflated by 1".into(),
                ));
            }
            let start = doc
                .start
                .as_ref()
                .map(|coords| {
                    let p = Point::new(coords.clone());
                    match system.contains(&p) {
                        Ok(true) => Ok(p),
                        Ok(false) => Err(CliError::Malformed(format!(
                            "start point {p} is not in the system"
                        ))),
                        Err(e) => Err(CliError::Malformed(e.to_string())),
                    }
                })
                .transpose()?;
            Ok(LoadedInstance::Jsc(Box::new(JscInstance {
                digest,
                system,
                graph,
                objective,
                start,
            })))
        }
        (None, Some(dm)) => {
            let mut instance = build_delta_matroid(dm)?;
            instance.digest = digest;
            if let Some(start) = &doc.start {
                let elements: Vec<usize> = start
                    .iter()
                    .map(|&e| {
                        usize::try_from(e)
                            .map_err(|_| CliError::Malformed(format!("bad start element {e}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let mask = subset_from_elements(&elements, instance.matroid.ground_size())?;
                if !instance.matroid.is_feasible(mask) {
                    return Err(CliError::Malformed(format!(
                        "start set {:?} is not in the family",
                        elements
                    )));
                }
                instance.start = Some(mask);
            }
            Ok(LoadedInstance::Dm(instance))
        }
    }
}

pub fn load_instance_file(path: &std::path::Path) -> Result<LoadedInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    load_instance(&text)
}
