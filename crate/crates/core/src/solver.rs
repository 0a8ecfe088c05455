//! The three minimization algorithms for separable convex objectives on
//! jump systems, with pluggable tie-breaking and t*-selection policies.
//!
//! Every step the solvers emit satisfies the descent conditions: the step
//! direction s* minimizes f(x + s) among unit steps that can be completed
//! to a strictly improving feasible move, and the completion t* is chosen
//! by the algorithm variant. All argmin sets are computed in full, so the
//! enumeration mode can branch over every valid choice.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::geometry::{Point, StepPair, UnitStep};
use crate::jump_system::JumpSystem;
use crate::objective::SeparableObjective;
use crate::value::Value;

/// Tie-breaking over equally good candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest coordinate index first, + before −, zero step first.
    #[default]
    Lex,
    /// Branch over every argmin candidate.
    EnumerateAll,
}

/// Which valid completion t* the original greedy algorithm takes. The
/// descent conditions admit any of them; the geodesic property does not
/// survive all of them, which is what the oracle demonstrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TStarPolicy {
    /// Steepest: minimize f(x + s* + t) over all valid t.
    Best,
    /// Adversarial: prefer a nonzero t (a length-2 move) whenever one is
    /// valid, taking the largest f among those; this reproduces the
    /// known non-geodesic trajectories.
    Worst,
    /// First valid t in canonical order.
    First,
    /// Branch over every valid t.
    EnumerateAll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JscAlgorithm {
    Greedy,
    Refined,
    Refined2,
}

impl JscAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            JscAlgorithm::Greedy => "greedy",
            JscAlgorithm::Refined => "refined",
            JscAlgorithm::Refined2 => "refined2",
        }
    }
}

/// One solver step: the point it left, the step pair applied, and the
/// objective values on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub from: Point,
    pub pair: StepPair,
    pub f_before: Value,
    pub f_after: Value,
}

/// The ordered trajectory produced by one solver run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub algorithm: JscAlgorithm,
    pub start: Point,
    pub steps: Vec<StepRecord>,
    pub final_point: Point,
    pub final_value: Value,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The visited points, start first, final last.
    pub fn points(&self) -> Vec<Point> {
        let mut pts = vec![self.start.clone()];
        for step in &self.steps {
            pts.push(step.from.step_pair(step.pair));
        }
        pts
    }

    /// Trace invariants: every point in the system, f strictly
    /// decreasing, consecutive points differing by s + t.
    pub fn check_consistency(
        &self,
        system: &impl JumpSystem,
        f: &SeparableObjective,
    ) -> Result<(), String> {
        let mut current = self.start.clone();
        for (k, step) in self.steps.iter().enumerate() {
            if step.from != current {
                return Err(format!("step {k} starts at {} not {current}", step.from));
            }
            if step.pair.norm1() == 0 {
                return Err(format!("step {k} has zero direction"));
            }
            let next = step.from.step_pair(step.pair);
            if !system.contains(&next).map_err(|e| e.to_string())? {
                return Err(format!("step {k} leaves the system at {next}"));
            }
            let f_before = f.eval(&current).map_err(|e| e.to_string())?;
            let f_after = f.eval(&next).map_err(|e| e.to_string())?;
            if f_before != step.f_before || f_after != step.f_after {
                return Err(format!("step {k} records wrong objective values"));
            }
            if f_after >= f_before {
                return Err(format!("step {k} does not strictly descend"));
            }
            current = next;
        }
        if current != self.final_point {
            return Err(format!(
                "final point {} does not match trajectory end {current}",
                self.final_point
            ));
        }
        Ok(())
    }
}

/// A set of traces produced under enumeration; `truncated` reports that
/// the branch budget was exhausted rather than silently sampling.
#[derive(Clone, Debug)]
pub struct RunSet {
    pub traces: Vec<Trace>,
    pub truncated: bool,
}

impl RunSet {
    /// The single trace of a deterministic run.
    pub fn into_single(mut self) -> Trace {
        assert_eq!(self.traces.len(), 1, "run was not deterministic");
        self.traces.pop().unwrap()
    }
}

/// Default cap on branch expansions under enumeration.
pub const DEFAULT_BRANCH_CAP: usize = 1_000_000;

fn ensure_start(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
) -> Result<(), SolveError> {
    if !system.contains(x0)? {
        return Err(SolveError::StartNotInSystem { point: x0.clone() });
    }
    if let Err(v) = f.verify_convexity() {
        return Err(SolveError::NotConvex {
            coordinate: v.coordinate,
            breakpoint: v.breakpoint,
        });
    }
    Ok(())
}

/// Local (and by the optimality theorem, global) optimality: no move
/// x + s + t inside the system improves f.
pub fn is_locally_optimal(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
) -> Result<bool, SolveError> {
    if !system.contains(x)? {
        return Err(SolveError::StartNotInSystem { point: x.clone() });
    }
    let fx = f.eval(x)?;
    let dim = system.dimension();
    for s in UnitStep::all_with_zero(dim) {
        for t in UnitStep::all_with_zero(dim) {
            let y = x.step(s).step(t);
            if system.contains(&y)? && f.eval(&y)? < fx {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All t ∈ U ∪ {0} completing s into a strictly improving feasible move,
/// in canonical order, with the resulting objective values.
fn valid_completions(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
    fx: Value,
    s: UnitStep,
) -> Result<Vec<(UnitStep, Value)>, SolveError> {
    let xs = x.step(s);
    let mut out = Vec::new();
    for t in UnitStep::all_with_zero(system.dimension()) {
        let y = xs.step(t);
        if system.contains(&y)? {
            let fy = f.eval(&y)?;
            if fy < fx {
                out.push((t, fy));
            }
        }
    }
    Ok(out)
}

/// The full argmin set of the direction-selection rule: all s ∈ U
/// minimizing f(x + s) subject to the existence of some t ∈ U ∪ {0}
/// with x + s + t in the system and f(x + s + t) < f(x). Canonical order.
pub fn select_s_star(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
) -> Result<Vec<UnitStep>, SolveError> {
    Ok(s_star_argmin(system, f, x)?.0)
}

/// Argmin set plus the minimized value f(x + s*).
pub(crate) fn s_star_argmin(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
) -> Result<(Vec<UnitStep>, Value), SolveError> {
    if !system.contains(x)? {
        return Err(SolveError::StartNotInSystem { point: x.clone() });
    }
    let fx = f.eval(x)?;
    let mut best: Option<Value> = None;
    let mut argmin = Vec::new();
    for s in UnitStep::all(system.dimension()) {
        if valid_completions(system, f, x, fx, s)?.is_empty() {
            continue;
        }
        let fxs = f.eval(&x.step(s))?;
        match best {
            Some(b) if fxs > b => {}
            Some(b) if fxs == b => argmin.push(s),
            _ => {
                best = Some(fxs);
                argmin = vec![s];
            }
        }
    }
    match best {
        Some(value) => Ok((argmin, value)),
        None => Err(SolveError::LocallyOptimal { point: x.clone() }),
    }
}

/// Every (s*, t*) pair the original greedy algorithm may take from x:
/// the full direction argmin crossed with every valid completion.
pub fn greedy_choices(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
) -> Result<Vec<StepPair>, SolveError> {
    let fx = f.eval(x)?;
    let (dirs, _) = s_star_argmin(system, f, x)?;
    let mut out = Vec::new();
    for s in dirs {
        for (t, _) in valid_completions(system, f, x, fx, s)? {
            out.push(StepPair::new(s, t));
        }
    }
    Ok(out)
}

/// Every (s*, t*) pair the refined algorithm may take from x: t* = 0
/// when x + s* is feasible, otherwise the full argmin of
/// f(x + s* + t) over feasible unit steps t.
pub fn refined_choices(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
) -> Result<Vec<StepPair>, SolveError> {
    let (dirs, _) = s_star_argmin(system, f, x)?;
    let mut out = Vec::new();
    for s in dirs {
        let xs = x.step(s);
        if system.contains(&xs)? {
            out.push(StepPair::new(s, UnitStep::Zero));
            continue;
        }
        let mut best: Option<Value> = None;
        let mut ties = Vec::new();
        for t in UnitStep::all(system.dimension()) {
            let y = xs.step(t);
            if !system.contains(&y)? {
                continue;
            }
            let fy = f.eval(&y)?;
            match best {
                Some(b) if fy > b => {}
                Some(b) if fy == b => ties.push(t),
                _ => {
                    best = Some(fy);
                    ties = vec![t];
                }
            }
        }
        // a valid completion exists by the choice of s*
        debug_assert!(best.is_some());
        for t in ties {
            out.push(StepPair::new(s, t));
        }
    }
    Ok(out)
}

/// Canonical decomposition of a two-unit move: nonzero first, ordered.
fn canonical_pair(s: UnitStep, t: UnitStep) -> StepPair {
    if s.is_zero() || (!t.is_zero() && t < s) {
        StepPair::new(t, s)
    } else {
        StepPair::new(s, t)
    }
}

/// Every minimizer of f over the punctured neighborhood
/// N(x) \ {x} = {y in the system : ‖y − x‖₁ ≤ 2, y ≠ x}, provided it
/// improves on f(x). Each candidate appears once, with a canonical
/// (s, t) decomposition.
pub fn refined2_choices(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x: &Point,
) -> Result<Vec<StepPair>, SolveError> {
    if !system.contains(x)? {
        return Err(SolveError::StartNotInSystem { point: x.clone() });
    }
    let fx = f.eval(x)?;
    let dim = system.dimension();
    let mut candidates: HashMap<Point, StepPair> = HashMap::new();
    for s in UnitStep::all_with_zero(dim) {
        for t in UnitStep::all_with_zero(dim) {
            let pair = StepPair::new(s, t);
            if pair.cancels() {
                continue;
            }
            let y = x.step_pair(pair);
            let canonical = canonical_pair(s, t);
            candidates
                .entry(y)
                .and_modify(|p| *p = (*p).min(canonical))
                .or_insert(canonical);
        }
    }
    let mut best: Option<Value> = None;
    let mut ties: Vec<StepPair> = Vec::new();
    for (y, pair) in candidates {
        if !system.contains(&y)? {
            continue;
        }
        let fy = f.eval(&y)?;
        if fy >= fx {
            continue;
        }
        match best {
            Some(b) if fy > b => {}
            Some(b) if fy == b => ties.push(pair),
            _ => {
                best = Some(fy);
                ties = vec![pair];
            }
        }
    }
    if best.is_none() {
        return Err(SolveError::LocallyOptimal { point: x.clone() });
    }
    ties.sort();
    Ok(ties)
}

/// Restrict the full greedy choice set to one policy's picks, per
/// direction s*.
fn greedy_policy_filter(
    f: &SeparableObjective,
    x: &Point,
    choices: Vec<StepPair>,
    tie: TieBreak,
    tpolicy: TStarPolicy,
) -> Result<Vec<StepPair>, SolveError> {
    // group by direction, preserving canonical order
    let mut dirs: Vec<UnitStep> = Vec::new();
    for pair in &choices {
        if !dirs.contains(&pair.s) {
            dirs.push(pair.s);
        }
    }
    if tie == TieBreak::Lex {
        dirs.truncate(1);
    }
    let mut out = Vec::new();
    for s in dirs {
        let mut ts = Vec::new();
        for pair in choices.iter().filter(|p| p.s == s) {
            ts.push((*pair, f.eval(&x.step_pair(*pair))?));
        }
        match tpolicy {
            TStarPolicy::EnumerateAll => out.extend(ts.iter().map(|(p, _)| *p)),
            TStarPolicy::First => out.push(ts[0].0),
            TStarPolicy::Best => {
                let pick = ts.iter().min_by_key(|(p, v)| (*v, *p)).unwrap().0;
                out.push(pick);
            }
            TStarPolicy::Worst => {
                let nonzero: Vec<_> = ts.iter().filter(|(p, _)| !p.t.is_zero()).collect();
                let pool = if nonzero.is_empty() {
                    ts.iter().collect::<Vec<_>>()
                } else {
                    nonzero
                };
                let pick = pool
                    .iter()
                    .max_by_key(|(p, v)| (*v, std::cmp::Reverse(*p)))
                    .unwrap()
                    .0;
                out.push(pick);
            }
        }
    }
    Ok(out)
}

type ChooseFn<'a, J> =
    dyn Fn(&J, &SeparableObjective, &Point) -> Result<Vec<StepPair>, SolveError> + 'a;

struct Enumerator<'a, J: JumpSystem> {
    system: &'a J,
    f: &'a SeparableObjective,
    algorithm: JscAlgorithm,
    cap: usize,
    expansions: usize,
    truncated: bool,
    traces: Vec<Trace>,
}

impl<'a, J: JumpSystem> Enumerator<'a, J> {
    fn run(mut self, x0: &Point, choose: &ChooseFn<'_, J>) -> Result<RunSet, SolveError> {
        let mut path = Vec::new();
        self.dfs(x0, &mut path, choose)?;
        Ok(RunSet {
            traces: self.traces,
            truncated: self.truncated,
        })
    }

    fn dfs(
        &mut self,
        x: &Point,
        path: &mut Vec<StepRecord>,
        choose: &ChooseFn<'_, J>,
    ) -> Result<(), SolveError> {
        if self.truncated {
            return Ok(());
        }
        if is_locally_optimal(self.system, self.f, x)? {
            if self.traces.len() == self.cap {
                self.truncated = true;
                return Ok(());
            }
            let start = path
                .first()
                .map(|s| s.from.clone())
                .unwrap_or_else(|| x.clone());
            self.traces.push(Trace {
                algorithm: self.algorithm,
                start,
                steps: path.clone(),
                final_point: x.clone(),
                final_value: self.f.eval(x)?,
            });
            return Ok(());
        }
        let choices = choose(self.system, self.f, x)?;
        for pair in choices {
            self.expansions += 1;
            if self.expansions > self.cap {
                self.truncated = true;
                return Ok(());
            }
            let next = x.step_pair(pair);
            let record = StepRecord {
                from: x.clone(),
                pair,
                f_before: self.f.eval(x)?,
                f_after: self.f.eval(&next)?,
            };
            path.push(record);
            self.dfs(&next, path, choose)?;
            path.pop();
        }
        Ok(())
    }
}

/// The original greedy algorithm. Under deterministic tie and policy
/// settings the run set holds exactly one trace.
pub fn jsc_greedy(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
    tie: TieBreak,
    tpolicy: TStarPolicy,
    branch_cap: usize,
) -> Result<RunSet, SolveError> {
    ensure_start(system, f, x0)?;
    let choose = move |j: &_, f: &SeparableObjective, x: &Point| {
        let choices = greedy_choices(j, f, x)?;
        greedy_policy_filter(f, x, choices, tie, tpolicy)
    };
    Enumerator {
        system,
        f,
        algorithm: JscAlgorithm::Greedy,
        cap: branch_cap,
        expansions: 0,
        truncated: false,
        traces: Vec::new(),
    }
    .run(x0, &choose)
}

/// Deterministic greedy run with lexicographic tie-breaking.
pub fn jsc_greedy_trace(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
    tpolicy: TStarPolicy,
) -> Result<Trace, SolveError> {
    assert!(
        tpolicy != TStarPolicy::EnumerateAll,
        "use jsc_greedy for enumeration"
    );
    Ok(jsc_greedy(system, f, x0, TieBreak::Lex, tpolicy, DEFAULT_BRANCH_CAP)?.into_single())
}

/// The refined greedy algorithm: t* = 0 whenever x + s* stays feasible,
/// otherwise the best feasible completion.
pub fn jsc_refined_greedy(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
    tie: TieBreak,
    branch_cap: usize,
) -> Result<RunSet, SolveError> {
    ensure_start(system, f, x0)?;
    let choose = move |j: &_, f: &_, x: &Point| {
        let choices = refined_choices(j, f, x)?;
        Ok(match tie {
            TieBreak::Lex => vec![choices[0]],
            TieBreak::EnumerateAll => choices,
        })
    };
    Enumerator {
        system,
        f,
        algorithm: JscAlgorithm::Refined,
        cap: branch_cap,
        expansions: 0,
        truncated: false,
        traces: Vec::new(),
    }
    .run(x0, &choose)
}

pub fn jsc_refined_greedy_trace(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
) -> Result<Trace, SolveError> {
    Ok(jsc_refined_greedy(system, f, x0, TieBreak::Lex, DEFAULT_BRANCH_CAP)?.into_single())
}

/// The neighborhood-steepest-descent variant: move to an f-minimizer of
/// the punctured radius-2 neighborhood while one improves on x.
pub fn jsc_refined_greedy2(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
    tie: TieBreak,
    branch_cap: usize,
) -> Result<RunSet, SolveError> {
    ensure_start(system, f, x0)?;
    let choose = move |j: &_, f: &_, x: &Point| {
        let choices = refined2_choices(j, f, x)?;
        Ok(match tie {
            TieBreak::Lex => vec![choices[0]],
            TieBreak::EnumerateAll => choices,
        })
    };
    Enumerator {
        system,
        f,
        algorithm: JscAlgorithm::Refined2,
        cap: branch_cap,
        expansions: 0,
        truncated: false,
        traces: Vec::new(),
    }
    .run(x0, &choose)
}

pub fn jsc_refined_greedy2_trace(
    system: &impl JumpSystem,
    f: &SeparableObjective,
    x0: &Point,
) -> Result<Trace, SolveError> {
    Ok(jsc_refined_greedy2(system, f, x0, TieBreak::Lex, DEFAULT_BRANCH_CAP)?.into_single())
}

/// The radius-2 neighborhood N(x) including x itself, restricted to the
/// system; exposed for inspection and tests.
pub fn neighborhood(system: &impl JumpSystem, x: &Point) -> Result<Vec<Point>, SolveError> {
    if !system.contains(x)? {
        return Err(SolveError::StartNotInSystem { point: x.clone() });
    }
    let dim = system.dimension();
    let mut out = vec![x.clone()];
    for s in UnitStep::all_with_zero(dim) {
        for t in UnitStep::all_with_zero(dim) {
            let y = x.step(s).step(t);
            if y != *x && system.contains(&y)? && !out.contains(&y) {
                out.push(y);
            }
        }
    }
    out.sort();
    Ok(out)
}
