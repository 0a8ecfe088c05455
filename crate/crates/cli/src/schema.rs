//! On-disk document shapes. Instances and traces are single
//! self-describing JSON documents; every number is an integer or an
//! exact decimal string, never a binary float.

use serde::{Deserialize, Serialize};

use jumpsys_core::geometry::UnitStep;
use jumpsys_core::value::Value;

use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

/// An exact number on disk: a JSON integer, or a string such as
/// `"-2.5"` or `"7/3"` for non-integers.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Exact(String),
}

impl Num {
    pub fn to_value(&self) -> Result<Value, CliError> {
        match self {
            Num::Int(n) => Ok(Value::from_int(*n)),
            Num::Exact(s) => s
                .parse()
                .map_err(|e| CliError::Malformed(format!("bad number: {e}"))),
        }
    }

    pub fn from_value(v: Value) -> Num {
        if v.is_integer() {
            if let Ok(n) = i64::try_from(v.numer()) {
                return Num::Int(n);
            }
        }
        Num::Exact(v.to_exact_string())
    }
}

/// `"0"`, `"+i"`, or `"-i"` with a 1-based coordinate.
pub fn step_to_string(s: UnitStep) -> String {
    match s {
        UnitStep::Zero => "0".to_string(),
        UnitStep::Plus(i) => format!("+{}", i + 1),
        UnitStep::Minus(i) => format!("-{}", i + 1),
    }
}

pub fn step_from_string(s: &str) -> Result<UnitStep, CliError> {
    if s == "0" {
        return Ok(UnitStep::Zero);
    }
    let bad = || CliError::Malformed(format!("bad unit step {s:?}"));
    let (sign, rest) = s.split_at(1);
    let index: usize = rest.parse().map_err(|_| bad())?;
    if index == 0 {
        return Err(bad());
    }
    match sign {
        "+" => Ok(UnitStep::Plus(index - 1)),
        "-" => Ok(UnitStep::Minus(index - 1)),
        _ => Err(bad()),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum JumpSystemDoc {
    Explicit {
        points: Vec<Vec<i64>>,
    },
    Graph {
        vertices: usize,
        /// unordered 1-based vertex pairs; loops and parallels allowed
        edges: Vec<(usize, usize)>,
        /// degree contributed by a loop: 2 (default) or 1
        #[serde(default, skip_serializing_if = "Option::is_none")]
        loop_convention: Option<u8>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TermDoc {
    Linear {
        slope: Num,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        intercept: Option<Num>,
    },
    Quadratic {
        weight: Num,
        center: Num,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Num>,
    },
    Table {
        lo: i64,
        values: Vec<Num>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectiveDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<Num>,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeltaMatroidDoc {
    pub ground_size: usize,
    /// feasible sets as lists of 1-based elements
    pub family: Vec<Vec<usize>>,
    pub weights: Vec<Num>,
}

/// A solvable instance: either a jump system with a separable objective,
/// or a weighted delta-matroid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump_system: Option<JumpSystemDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_matroid: Option<DeltaMatroidDoc>,
    /// start point (jump system) or start set of 1-based elements
    /// (delta-matroid)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JscStepDoc {
    pub x: Vec<i64>,
    pub s: String,
    pub t: String,
    pub f_before: Num,
    pub f_after: Num,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DmStepDoc {
    pub set: Vec<usize>,
    pub i: usize,
    pub j: usize,
    pub cost_before: Num,
    pub cost_after: Num,
}

/// A recorded solver run. Re-running the recorded algorithm with the
/// recorded policies on the digested instance reproduces this document
/// byte for byte.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceDoc {
    pub format_version: u32,
    pub instance_digest: String,
    /// greedy | refined | refined2 | dm-greedy | dm-refined
    pub algorithm: String,
    pub tie: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tpolicy: Option<String>,
    pub start: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<JscStepDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dm_steps: Vec<DmStepDoc>,
    pub final_point: Vec<i64>,
    pub final_value: Num,
    /// optional oracle-computed µ at each visited point (never trusted
    /// on input)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<u64>>,
}
