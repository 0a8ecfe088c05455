//! Trace documents: serialization of solver runs and their replay.

use jumpsys_core::delta_matroid::DmTrace;
use jumpsys_core::geometry::{Point, StepPair};
use jumpsys_core::solver::{JscAlgorithm, StepRecord, Trace};

use crate::instance::{subset_from_elements, subset_to_elements};
use crate::schema::{
    step_from_string, step_to_string, DmStepDoc, JscStepDoc, Num, TraceDoc, FORMAT_VERSION,
};
use crate::CliError;

pub fn algorithm_name(a: JscAlgorithm) -> &'static str {
    a.name()
}

pub fn algorithm_from_name(name: &str) -> Result<JscAlgorithm, CliError> {
    match name {
        "greedy" => Ok(JscAlgorithm::Greedy),
        "refined" => Ok(JscAlgorithm::Refined),
        "refined2" => Ok(JscAlgorithm::Refined2),
        other => Err(CliError::Malformed(format!("unknown algorithm {other:?}"))),
    }
}

pub fn trace_to_doc(
    trace: &Trace,
    digest: &str,
    tie: &str,
    tpolicy: Option<&str>,
    mu: Option<Vec<u64>>,
) -> TraceDoc {
    TraceDoc {
        format_version: FORMAT_VERSION,
        instance_digest: digest.to_string(),
        algorithm: trace.algorithm.name().to_string(),
        tie: tie.to_string(),
        tpolicy: tpolicy.map(str::to_string),
        start: trace.start.coords().to_vec(),
        steps: trace
            .steps
            .iter()
            .map(|step| JscStepDoc {
                x: step.from.coords().to_vec(),
                s: step_to_string(step.pair.s),
                t: step_to_string(step.pair.t),
                f_before: Num::from_value(step.f_before),
                f_after: Num::from_value(step.f_after),
            })
            .collect(),
        dm_steps: Vec::new(),
        final_point: trace.final_point.coords().to_vec(),
        final_value: Num::from_value(trace.final_value),
        mu,
    }
}

pub fn doc_to_trace(doc: &TraceDoc) -> Result<Trace, CliError> {
    let algorithm = algorithm_from_name(&doc.algorithm)?;
    let start = Point::new(doc.start.clone());
    let mut steps = Vec::with_capacity(doc.steps.len());
    for step in &doc.steps {
        steps.push(StepRecord {
            from: Point::new(step.x.clone()),
            pair: StepPair::new(step_from_string(&step.s)?, step_from_string(&step.t)?),
            f_before: step.f_before.to_value()?,
            f_after: step.f_after.to_value()?,
        });
    }
    Ok(Trace {
        algorithm,
        start,
        steps,
        final_point: Point::new(doc.final_point.clone()),
        final_value: doc.final_value.to_value()?,
    })
}

pub fn dm_trace_to_doc(
    trace: &DmTrace,
    ground_size: usize,
    digest: &str,
    algorithm: &str,
) -> TraceDoc {
    TraceDoc {
        format_version: FORMAT_VERSION,
        instance_digest: digest.to_string(),
        algorithm: algorithm.to_string(),
        tie: "lex".to_string(),
        tpolicy: None,
        start: subset_to_elements(trace.start, ground_size)
            .into_iter()
            .map(|e| e as i64)
            .collect(),
        steps: Vec::new(),
        dm_steps: trace
            .steps
            .iter()
            .map(|step| DmStepDoc {
                set: subset_to_elements(step.from, ground_size),
                i: step.i_star + 1,
                j: step.j_star + 1,
                cost_before: Num::from_value(step.cost_before),
                cost_after: Num::from_value(step.cost_after),
            })
            .collect(),
        final_point: subset_to_elements(trace.final_set, ground_size)
            .into_iter()
            .map(|e| e as i64)
            .collect(),
        final_value: Num::from_value(trace.final_cost),
        mu: None,
    }
}

pub fn doc_to_dm_trace(doc: &TraceDoc, ground_size: usize) -> Result<DmTrace, CliError> {
    use jumpsys_core::delta_matroid::DmStep;
    let to_mask = |elements: &[i64]| -> Result<_, CliError> {
        let elems: Vec<usize> = elements
            .iter()
            .map(|&e| {
                usize::try_from(e).map_err(|_| CliError::Malformed(format!("bad element {e}")))
            })
            .collect::<Result<_, _>>()?;
        subset_from_elements(&elems, ground_size)
    };
    let mut steps = Vec::with_capacity(doc.dm_steps.len());
    for step in &doc.dm_steps {
        if step.i == 0 || step.i > ground_size || step.j == 0 || step.j > ground_size {
            return Err(CliError::Malformed(format!(
                "step elements ({}, {}) outside the ground set",
                step.i, step.j
            )));
        }
        steps.push(DmStep {
            from: subset_from_elements(&step.set, ground_size)?,
            i_star: step.i - 1,
            j_star: step.j - 1,
            cost_before: step.cost_before.to_value()?,
            cost_after: step.cost_after.to_value()?,
        });
    }
    Ok(DmTrace {
        start: to_mask(&doc.start)?,
        steps,
        final_set: to_mask(&doc.final_point)?,
        final_cost: doc.final_value.to_value()?,
    })
}

pub fn parse_trace_doc(text: &str) -> Result<TraceDoc, CliError> {
    let doc: TraceDoc =
        serde_json::from_str(text).map_err(|e| CliError::Malformed(e.to_string()))?;
    if doc.format_version != FORMAT_VERSION {
        return Err(CliError::Malformed(format!(
            "unsupported format_version {}",
            doc.format_version
        )));
    }
    Ok(doc)
}

/// Canonical rendering used for files; deterministic, so replayed runs
/// reproduce files byte for byte.
pub fn render(doc: &TraceDoc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("trace docs serialize");
    text.push('\n');
    text
}
