//! Brute-force ground truth and verifiers.
//!
//! The oracle enumerates the full point set of an explicit system — never
//! samples — to compute the optimal set, the nearest-optimal distance µ,
//! and the nearest-optimal set M*. On top of that it checks, exhaustively
//! over all points and all argmin tie branches, the properties the
//! algorithms are supposed to have: local-global optimality equivalence,
//! the Ψ iteration bound, step-quality monotonicity, the nearest-optimal
//! direction property, the target-region property, the per-step µ drop
//! with the M* recursion, and the [⌈µ/2⌉, µ] iteration bounds of the
//! refined algorithm.
//!
//! Branch quantification never enumerates paths: the set of valid moves
//! out of each point induces a descent DAG over the system, and path
//! properties (lengths, consecutive-step comparisons) are checked by
//! dynamic programming on that DAG, which covers every execution of the
//! algorithms under every tie-breaking choice.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::SolveError;
use crate::geometry::{in_s_region, l1_distance, Point, StepPair, UnitStep};
use crate::jump_system::ExplicitJumpSystem;
use crate::objective::SeparableObjective;
use crate::solver::{
    greedy_choices, is_locally_optimal, refined2_choices, refined_choices, s_star_argmin,
    JscAlgorithm, Trace,
};
use crate::value::Value;

/// Exact optimal set and per-point nearest-optimal data, by enumeration.
#[derive(Clone, Debug)]
pub struct OptimalityProfile {
    opt_value: Value,
    opt_set: Vec<Point>,
    mu_cache: HashMap<Point, u64>,
}

impl OptimalityProfile {
    /// Enumerates the system to find the argmin set of f, then caches µ
    /// for every point of the system.
    pub fn build(system: &ExplicitJumpSystem, f: &SeparableObjective) -> Result<Self, SolveError> {
        let mut best: Option<Value> = None;
        let mut opt_set = Vec::new();
        for p in system.points() {
            let v = f.eval(p)?;
            match best {
                Some(b) if v > b => {}
                Some(b) if v == b => opt_set.push(p.clone()),
                _ => {
                    best = Some(v);
                    opt_set = vec![p.clone()];
                }
            }
        }
        let mut profile = OptimalityProfile {
            opt_value: best.expect("systems are nonempty"),
            opt_set,
            mu_cache: HashMap::new(),
        };
        profile.mu_cache = system
            .points()
            .iter()
            .map(|p| (p.clone(), profile.nearest_distance(p)))
            .collect();
        Ok(profile)
    }

    pub fn opt_value(&self) -> Value {
        self.opt_value
    }

    /// Optimal points in lexicographic order.
    pub fn opt_set(&self) -> &[Point] {
        &self.opt_set
    }

    fn nearest_distance(&self, x: &Point) -> u64 {
        self.opt_set
            .iter()
            .map(|y| l1_distance(x, y).expect("profile dimension"))
            .min()
            .expect("optimal set is nonempty")
    }

    /// µ(x): L1 distance from x to the nearest optimal solution.
    pub fn mu(&self, x: &Point) -> u64 {
        match self.mu_cache.get(x) {
            Some(&mu) => mu,
            None => self.nearest_distance(x),
        }
    }

    /// M*(x): the optimal solutions nearest to x, in lexicographic order.
    pub fn m_star(&self, x: &Point) -> Vec<Point> {
        let mu = self.mu(x);
        self.opt_set
            .iter()
            .filter(|y| l1_distance(x, y).expect("profile dimension") == mu)
            .cloned()
            .collect()
    }
}

/// A witnessing tuple for a failed sweep, with enough context to replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub at: Point,
    pub step: Option<StepPair>,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.step {
            Some(p) => write!(f, "at {} with {}: {}", self.at, p, self.detail),
            None => write!(f, "at {}: {}", self.at, self.detail),
        }
    }
}

fn first_violation(mut violations: Vec<Violation>) -> Result<(), Violation> {
    violations.sort_by(|a, b| a.at.cmp(&b.at).then_with(|| a.step.cmp(&b.step)));
    match violations.into_iter().next() {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

/// Local optimality coincides with global optimality at every point.
pub fn verify_theorem1(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    let results: Vec<Violation> = system
        .points()
        .par_iter()
        .filter_map(|x| {
            let local = match is_locally_optimal(system, f, x) {
                Ok(b) => b,
                Err(e) => {
                    return Some(Violation {
                        at: x.clone(),
                        step: None,
                        detail: e.to_string(),
                    })
                }
            };
            let global = f.eval(x).ok()? == profile.opt_value();
            (local != global).then(|| Violation {
                at: x.clone(),
                step: None,
                detail: format!("locally optimal = {local}, globally optimal = {global}"),
            })
        })
        .collect();
    first_violation(results)
}

/// For every non-optimal x and every direction s* in the full argmin,
/// some nearest optimal solution lies strictly on the far side of x in
/// the s* coordinate.
pub fn verify_theorem4(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    let results: Vec<Violation> = system
        .points()
        .par_iter()
        .filter_map(|x| theorem4_at(system, f, profile, x).err())
        .collect();
    first_violation(results)
}

#[allow(clippy::int_plus_one)]
fn theorem4_at(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
    x: &Point,
) -> Result<(), Violation> {
    if f.eval(x).map_err(|e| Violation {
        at: x.clone(),
        step: None,
        detail: e.to_string(),
    })? == profile.opt_value()
    {
        return Ok(());
    }
    let dirs = s_star_argmin(system, f, x).map_err(|e| Violation {
        at: x.clone(),
        step: None,
        detail: e.to_string(),
    })?;
    let nearest = profile.m_star(x);
    for s in dirs.0 {
        let witnessed = nearest.iter().any(|opt| match s {
            UnitStep::Plus(i) => opt[i] >= x[i] + 1,
            UnitStep::Minus(i) => opt[i] <= x[i] - 1,
            UnitStep::Zero => false,
        });
        if !witnessed {
            return Err(Violation {
                at: x.clone(),
                step: Some(StepPair::new(s, UnitStep::Zero)),
                detail: "no nearest optimal solution on the far side of s*".into(),
            });
        }
    }
    Ok(())
}

/// For every non-optimal x and every refined step choice (s*, t*), the
/// nearest-optimal set meets the target region S(x; s*, t*).
pub fn verify_theorem5(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    sweep_refined_steps(system, f, profile, |x, pair, m_before, _m_after| {
        let hit = m_before
            .iter()
            .any(|opt| in_s_region(opt, x, pair.s, pair.t).unwrap_or(false));
        if hit {
            Ok(())
        } else {
            Err("M*(x) does not meet S(x; s*, t*)".into())
        }
    })
}

/// For every non-optimal x and every refined step choice, µ drops by the
/// step length and the nearest-optimal set transforms by intersection
/// with the target region (checked as set equality).
pub fn verify_corollary1_sweep(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    sweep_refined_steps(system, f, profile, |x, pair, m_before, m_after| {
        let mu_before = profile.mu(x);
        let mu_after = profile.mu(&x.step_pair(pair));
        let drop = pair.norm1();
        if mu_after + drop != mu_before {
            return Err(format!(
                "µ went {mu_before} -> {mu_after}, expected drop {drop}"
            ));
        }
        let filtered: Vec<Point> = m_before
            .iter()
            .filter(|opt| in_s_region(opt, x, pair.s, pair.t).unwrap_or(false))
            .cloned()
            .collect();
        if filtered != *m_after {
            return Err(format!(
                "M* recursion mismatch: filtered {} points, fresh {} points",
                filtered.len(),
                m_after.len()
            ));
        }
        Ok(())
    })
}

fn sweep_refined_steps(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
    check: impl Fn(&Point, StepPair, &[Point], &[Point]) -> Result<(), String> + Sync,
) -> Result<(), Violation> {
    let results: Vec<Violation> = system
        .points()
        .par_iter()
        .filter_map(|x| {
            let fx = f.eval(x).ok()?;
            if fx == profile.opt_value() {
                return None;
            }
            let choices = match refined_choices(system, f, x) {
                Ok(c) => c,
                Err(e) => {
                    return Some(Violation {
                        at: x.clone(),
                        step: None,
                        detail: e.to_string(),
                    })
                }
            };
            let m_before = profile.m_star(x);
            for pair in choices {
                let m_after = profile.m_star(&x.step_pair(pair));
                if let Err(detail) = check(x, pair, &m_before, &m_after) {
                    return Some(Violation {
                        at: x.clone(),
                        step: Some(pair),
                        detail,
                    });
                }
            }
            None
        })
        .collect();
    first_violation(results)
}

/// Descent DAG of an algorithm over an explicit system: for each point,
/// every move some tie branch may take.
struct StepGraph {
    points: Vec<Point>,
    edges: Vec<Vec<(StepPair, usize)>>,
    optimal: Vec<bool>,
}

impl StepGraph {
    fn build(
        system: &ExplicitJumpSystem,
        f: &SeparableObjective,
        profile: &OptimalityProfile,
        choices: impl Fn(&Point) -> Result<Vec<StepPair>, SolveError>,
    ) -> Result<Self, Violation> {
        let points: Vec<Point> = system.points().to_vec();
        let index: HashMap<Point, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut edges = Vec::with_capacity(points.len());
        let mut optimal = Vec::with_capacity(points.len());
        for p in &points {
            let fx = f.eval(p).map_err(|e| Violation {
                at: p.clone(),
                step: None,
                detail: e.to_string(),
            })?;
            if fx == profile.opt_value() {
                optimal.push(true);
                edges.push(Vec::new());
                continue;
            }
            optimal.push(false);
            let outs = choices(p).map_err(|e| Violation {
                at: p.clone(),
                step: None,
                detail: e.to_string(),
            })?;
            let mut row = Vec::with_capacity(outs.len());
            for pair in outs {
                let next = p.step_pair(pair);
                let next_idx = *index.get(&next).ok_or_else(|| Violation {
                    at: p.clone(),
                    step: Some(pair),
                    detail: format!("step leaves the system at {next}"),
                })?;
                row.push((pair, next_idx));
            }
            edges.push(row);
        }
        Ok(StepGraph {
            points,
            edges,
            optimal,
        })
    }

    /// (longest, shortest) run length from every point, in steps. The
    /// graph is acyclic because every edge strictly decreases f.
    fn run_length_bounds(&self) -> (Vec<u64>, Vec<u64>) {
        let n = self.points.len();
        let mut longest = vec![u64::MAX; n];
        let mut shortest = vec![u64::MAX; n];
        fn visit(
            g: &StepGraph,
            i: usize,
            longest: &mut Vec<u64>,
            shortest: &mut Vec<u64>,
        ) -> (u64, u64) {
            if longest[i] != u64::MAX {
                return (longest[i], shortest[i]);
            }
            if g.optimal[i] {
                longest[i] = 0;
                shortest[i] = 0;
                return (0, 0);
            }
            let mut lo = u64::MAX;
            let mut hi = 0;
            for &(_, next) in &g.edges[i] {
                let (l, s) = visit(g, next, longest, shortest);
                hi = hi.max(l + 1);
                lo = lo.min(s + 1);
            }
            longest[i] = hi;
            shortest[i] = lo;
            (hi, lo)
        }
        for i in 0..n {
            visit(self, i, &mut longest, &mut shortest);
        }
        (longest, shortest)
    }
}

/// Every execution of the greedy algorithm, from every start point and
/// under every tie and t*-policy choice, takes at most Ψ(J) steps.
pub fn verify_theorem2(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    let graph = StepGraph::build(system, f, profile, |x| greedy_choices(system, f, x))?;
    let (longest, _) = graph.run_length_bounds();
    let psi = system.psi();
    for (i, len) in longest.iter().enumerate() {
        if *len > psi {
            return Err(Violation {
                at: graph.points[i].clone(),
                step: None,
                detail: format!("a greedy run of {len} steps exceeds Ψ = {psi}"),
            });
        }
    }
    Ok(())
}

/// Along every greedy execution, the per-step quality f(x + s*) − f(x)
/// is nondecreasing from one iteration to the next. Checked over every
/// consecutive transition pair of the descent DAG.
pub fn verify_theorem3(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    let graph = StepGraph::build(system, f, profile, |x| greedy_choices(system, f, x))?;
    // f(x + s*) − f(x) is the same for every argmin direction at x
    let mut delta: Vec<Option<Value>> = vec![None; graph.points.len()];
    for (i, p) in graph.points.iter().enumerate() {
        if graph.optimal[i] {
            continue;
        }
        let (_, best) = s_star_argmin(system, f, p).map_err(|e| Violation {
            at: p.clone(),
            step: None,
            detail: e.to_string(),
        })?;
        let fx = f.eval(p).map_err(|e| Violation {
            at: p.clone(),
            step: None,
            detail: e.to_string(),
        })?;
        delta[i] = Some(best - fx);
    }
    for (i, p) in graph.points.iter().enumerate() {
        let Some(d_here) = delta[i] else { continue };
        for &(pair, next) in &graph.edges[i] {
            if let Some(d_next) = delta[next] {
                if d_here > d_next {
                    return Err(Violation {
                        at: p.clone(),
                        step: Some(pair),
                        detail: format!(
                            "step quality decreased: {d_here} then {d_next} at {}",
                            graph.points[next]
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Every execution of the refined algorithm from x0 takes between
/// ⌈µ(x0)/2⌉ and µ(x0) steps, for every start point and tie branch.
pub fn verify_corollary2(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    let graph = StepGraph::build(system, f, profile, |x| refined_choices(system, f, x))?;
    let (longest, shortest) = graph.run_length_bounds();
    for (i, p) in graph.points.iter().enumerate() {
        let mu = profile.mu(p);
        let lower = mu.div_ceil(2);
        if longest[i] > mu || shortest[i] < lower {
            return Err(Violation {
                at: p.clone(),
                step: None,
                detail: format!(
                    "refined run lengths in [{}, {}], bounds are [{lower}, {mu}]",
                    shortest[i], longest[i]
                ),
            });
        }
    }
    Ok(())
}

/// Every execution of the neighborhood variant terminates at an optimal
/// point (it carries no geodesic or iteration-bound claims). Building
/// the descent DAG already demands an improving move at every
/// non-optimal point and in-system targets for every move.
pub fn verify_refined2_terminates_optimal(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    StepGraph::build(system, f, profile, |x| refined2_choices(system, f, x))?;
    Ok(())
}

/// Per-step record of the geodesic check on a concrete trace.
#[derive(Clone, Debug)]
pub struct GeodesicStepRecord {
    pub mu_before: u64,
    pub mu_after: u64,
    pub expected_drop: u64,
    pub m_star_recursion_ok: bool,
}

/// Trace-level geodesic report: the µ drop of every step and the M*
/// recursion verdict, with the first violation if any.
#[derive(Clone, Debug)]
pub struct GeodesicReport {
    /// Set when the trace was not produced by the refined algorithm; the
    /// checks still run, for contrast, but the claim does not apply.
    pub algorithm_mismatch: bool,
    pub steps: Vec<GeodesicStepRecord>,
    pub first_violation: Option<usize>,
}

impl GeodesicReport {
    pub fn pass(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Checks eq-by-eq, on a concrete trace, that each step drops µ by its
/// length and that M* transforms by intersection with the target region.
pub fn verify_corollary1(profile: &OptimalityProfile, trace: &Trace) -> GeodesicReport {
    let mut steps = Vec::with_capacity(trace.steps.len());
    let mut first_violation = None;
    for (k, step) in trace.steps.iter().enumerate() {
        let after = step.from.step_pair(step.pair);
        let mu_before = profile.mu(&step.from);
        let mu_after = profile.mu(&after);
        let expected_drop = step.pair.norm1();
        let m_before = profile.m_star(&step.from);
        let m_after = profile.m_star(&after);
        let filtered: Vec<Point> = m_before
            .iter()
            .filter(|opt| in_s_region(opt, &step.from, step.pair.s, step.pair.t).unwrap_or(false))
            .cloned()
            .collect();
        let m_star_recursion_ok = filtered == m_after;
        let drop_ok = mu_before == mu_after + expected_drop;
        if first_violation.is_none() && !(drop_ok && m_star_recursion_ok) {
            first_violation = Some(k);
        }
        steps.push(GeodesicStepRecord {
            mu_before,
            mu_after,
            expected_drop,
            m_star_recursion_ok,
        });
    }
    GeodesicReport {
        algorithm_mismatch: trace.algorithm != JscAlgorithm::Refined,
        steps,
        first_violation,
    }
}

/// Iteration-count check for a concrete trace: at most Ψ(J) steps for the
/// greedy algorithm, within [⌈µ(x0)/2⌉, µ(x0)] for the refined one. The
/// neighborhood variant carries no bound claim.
pub fn verify_bounds(
    system: &ExplicitJumpSystem,
    profile: &OptimalityProfile,
    trace: &Trace,
) -> Result<(), Violation> {
    let steps = trace.len() as u64;
    match trace.algorithm {
        JscAlgorithm::Greedy => {
            let psi = system.psi();
            if steps > psi {
                return Err(Violation {
                    at: trace.start.clone(),
                    step: None,
                    detail: format!("{steps} greedy steps exceed Ψ = {psi}"),
                });
            }
        }
        JscAlgorithm::Refined => {
            let mu = profile.mu(&trace.start);
            let lower = mu.div_ceil(2);
            if steps < lower || steps > mu {
                return Err(Violation {
                    at: trace.start.clone(),
                    step: None,
                    detail: format!("{steps} refined steps outside [{lower}, {mu}]"),
                });
            }
        }
        JscAlgorithm::Refined2 => {
            return Err(Violation {
                at: trace.start.clone(),
                step: None,
                detail: "no iteration bound is claimed for the neighborhood variant".into(),
            });
        }
    }
    Ok(())
}

/// Step-quality monotonicity along a concrete greedy or refined trace:
/// the recorded sequence f(x_k + s*_k) − f(x_k) is nondecreasing.
pub fn verify_monotone(f: &SeparableObjective, trace: &Trace) -> Result<(), Violation> {
    if trace.algorithm == JscAlgorithm::Refined2 {
        return Err(Violation {
            at: trace.start.clone(),
            step: None,
            detail: "step-quality monotonicity is not claimed for the neighborhood variant".into(),
        });
    }
    let mut previous: Option<Value> = None;
    for (k, step) in trace.steps.iter().enumerate() {
        let fx = f.eval(&step.from).map_err(|e| Violation {
            at: step.from.clone(),
            step: Some(step.pair),
            detail: e.to_string(),
        })?;
        let fxs = f
            .eval(&step.from.step(step.pair.s))
            .map_err(|e| Violation {
                at: step.from.clone(),
                step: Some(step.pair),
                detail: e.to_string(),
            })?;
        let delta = fxs - fx;
        if let Some(prev) = previous {
            if prev > delta {
                return Err(Violation {
                    at: step.from.clone(),
                    step: Some(step.pair),
                    detail: format!("step quality decreased at step {k}: {prev} then {delta}"),
                });
            }
        }
        previous = Some(delta);
    }
    Ok(())
}

/// Which verification sweeps to run over one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepCheck {
    Theorem1,
    Theorem2,
    Theorem3,
    Theorem4,
    Theorem5,
    Corollary1,
    Corollary2,
}

impl SweepCheck {
    pub const ALL: [SweepCheck; 7] = [
        SweepCheck::Theorem1,
        SweepCheck::Theorem2,
        SweepCheck::Theorem3,
        SweepCheck::Theorem4,
        SweepCheck::Theorem5,
        SweepCheck::Corollary1,
        SweepCheck::Corollary2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepCheck::Theorem1 => "thm1",
            SweepCheck::Theorem2 => "thm2",
            SweepCheck::Theorem3 => "thm3",
            SweepCheck::Theorem4 => "thm4",
            SweepCheck::Theorem5 => "thm5",
            SweepCheck::Corollary1 => "cor1",
            SweepCheck::Corollary2 => "cor2",
        }
    }
}

/// Runs one named sweep over an explicit instance.
pub fn run_sweep(
    check: SweepCheck,
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
    profile: &OptimalityProfile,
) -> Result<(), Violation> {
    match check {
        SweepCheck::Theorem1 => verify_theorem1(system, f, profile),
        SweepCheck::Theorem2 => verify_theorem2(system, f, profile),
        SweepCheck::Theorem3 => verify_theorem3(system, f, profile),
        SweepCheck::Theorem4 => verify_theorem4(system, f, profile),
        SweepCheck::Theorem5 => verify_theorem5(system, f, profile),
        SweepCheck::Corollary1 => verify_corollary1_sweep(system, f, profile),
        SweepCheck::Corollary2 => verify_corollary2(system, f, profile),
    }
}

/// Convenience: every sweep; first failure wins.
pub fn run_all_sweeps(
    system: &ExplicitJumpSystem,
    f: &SeparableObjective,
) -> Result<(), (SweepCheck, Violation)> {
    let profile = OptimalityProfile::build(system, f).map_err(|e| {
        (
            SweepCheck::Theorem1,
            Violation {
                at: system.points()[0].clone(),
                step: None,
                detail: e.to_string(),
            },
        )
    })?;
    for check in SweepCheck::ALL {
        run_sweep(check, system, f, &profile).map_err(|v| (check, v))?;
    }
    verify_refined2_terminates_optimal(system, f, &profile)
        .map_err(|v| (SweepCheck::Theorem1, v))?;
    Ok(())
}
