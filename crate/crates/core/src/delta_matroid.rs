//! Delta-matroids: set families under the symmetric exchange axiom,
//! linear optimization over them, and the geodesic verification of the
//! refined exchange algorithm.
//!
//! Families are stored as sorted lists of bitmasks over a ground set of
//! at most 16 elements; symmetric differences are mask xor.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::error::SystemError;
use crate::geometry::Point;
use crate::jump_system::ExplicitJumpSystem;
use crate::value::Value;

/// Hard cap on ground-set size for the bitmask representation.
pub const MAX_GROUND: usize = 16;

/// Cap on ground-set size for full family enumeration.
pub const MAX_ENUM_GROUND: usize = 4;

pub type SubsetMask = u32;

/// Renders a subset mask as {1,3} with 1-based elements.
pub fn format_subset(mask: SubsetMask) -> String {
    let elems: Vec<String> = (0..MAX_GROUND)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DmError {
    #[error("ground set of {n} elements exceeds the cap of {max}")]
    GroundTooLarge { n: usize, max: usize },
    #[error("family must be nonempty")]
    EmptyFamily,
    #[error("subset {} is outside the ground set of {n} elements", format_subset(*.mask))]
    SubsetOutOfRange { mask: SubsetMask, n: usize },
    #[error("weight vector has {got} entries, expected {expected}")]
    WeightLength { got: usize, expected: usize },
    #[error("start set {} is not in the family", format_subset(*.mask))]
    StartInfeasible { mask: SubsetMask },
    #[error("{} is already optimal", format_subset(*.mask))]
    LocallyOptimal { mask: SubsetMask },
    #[error("family enumeration is supported only for ground sets of at most {max} elements")]
    EnumTooLarge { max: usize },
}

/// A set family over {1..n}; a delta-matroid when the symmetric exchange
/// axiom holds, which `verify_symmetric_exchange` decides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaMatroid {
    ground_size: usize,
    family: Vec<SubsetMask>,
}

/// A triple (X, Y, i) with i ∈ X Δ Y witnessing that neither X Δ {i} nor
/// any X Δ {i, j} with j ∈ X Δ Y is in the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeCounterexample {
    pub x: SubsetMask,
    pub y: SubsetMask,
    pub i: usize,
}

impl fmt::Display for ExchangeCounterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(X={}, Y={}, i={})",
            format_subset(self.x),
            format_subset(self.y),
            self.i + 1
        )
    }
}

impl DeltaMatroid {
    pub fn new(ground_size: usize, mut family: Vec<SubsetMask>) -> Result<Self, DmError> {
        if ground_size > MAX_GROUND {
            return Err(DmError::GroundTooLarge {
                n: ground_size,
                max: MAX_GROUND,
            });
        }
        if family.is_empty() {
            return Err(DmError::EmptyFamily);
        }
        let limit: SubsetMask = if ground_size == 32 {
            SubsetMask::MAX
        } else {
            (1 << ground_size) - 1
        };
        if let Some(&mask) = family.iter().find(|&&m| m & !limit != 0) {
            return Err(DmError::SubsetOutOfRange {
                mask,
                n: ground_size,
            });
        }
        family.sort_unstable();
        family.dedup();
        Ok(DeltaMatroid {
            ground_size,
            family,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    /// Feasible sets in ascending mask order.
    pub fn family(&self) -> &[SubsetMask] {
        &self.family
    }

    pub fn is_feasible(&self, mask: SubsetMask) -> bool {
        self.family.binary_search(&mask).is_ok()
    }

    /// Exhaustive check of the symmetric exchange axiom over all
    /// X, Y in the family and i ∈ X Δ Y; first counterexample in scan
    /// order.
    pub fn verify_symmetric_exchange(&self) -> Result<(), ExchangeCounterexample> {
        for &x in &self.family {
            for &y in &self.family {
                let diff = x ^ y;
                for i in 0..self.ground_size {
                    let bit_i = 1 << i;
                    if diff & bit_i == 0 {
                        continue;
                    }
                    if self.is_feasible(x ^ bit_i) {
                        continue;
                    }
                    let repaired = (0..self.ground_size).any(|j| {
                        let bit_j = 1 << j;
                        diff & bit_j != 0 && self.is_feasible(x ^ (bit_i | bit_j) as SubsetMask)
                    });
                    if !repaired {
                        return Err(ExchangeCounterexample { x, y, i });
                    }
                }
            }
        }
        Ok(())
    }

    /// The characteristic-vector image {χ_F : F in the family} ⊆ {0,1}ⁿ.
    /// It satisfies the jump-system exchange axiom iff the family
    /// satisfies the symmetric exchange axiom.
    pub fn to_jump_system(&self) -> Result<ExplicitJumpSystem, SystemError> {
        let points = self
            .family
            .iter()
            .map(|&mask| {
                Point::new(
                    (0..self.ground_size)
                        .map(|i| ((mask >> i) & 1) as i64)
                        .collect(),
                )
            })
            .collect();
        ExplicitJumpSystem::new(points)
    }

    /// χ_F for a feasible set.
    pub fn characteristic(&self, mask: SubsetMask) -> Point {
        Point::new(
            (0..self.ground_size)
                .map(|i| ((mask >> i) & 1) as i64)
                .collect(),
        )
    }
}

/// Σ c(i) over the members of a subset.
pub fn subset_cost(c: &[Value], mask: SubsetMask) -> Value {
    c.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| *v)
        .sum()
}

fn check_weights(d: &DeltaMatroid, c: &[Value]) -> Result<(), DmError> {
    if c.len() != d.ground_size() {
        return Err(DmError::WeightLength {
            got: c.len(),
            expected: d.ground_size(),
        });
    }
    Ok(())
}

/// The processing order of the classical greedy scan: indices sorted by
/// decreasing |c|, ties by smaller index first. 0-based.
pub fn greedy_order(c: &[Value]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.len()).collect();
    order.sort_by(|&a, &b| c[b].abs().cmp(&c[a].abs()).then(a.cmp(&b)));
    order
}

/// All processing orders consistent with decreasing |c| (permutations
/// within equal-|c| groups), for branch verification.
pub fn consistent_orders(c: &[Value]) -> Vec<Vec<usize>> {
    let base = greedy_order(c);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &base {
        match groups.last_mut() {
            Some(g) if c[g[0]].abs() == c[i].abs() => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for (k, &head) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(k);
            for mut tail in permutations(&rest) {
                let mut perm = vec![head];
                perm.append(&mut tail);
                out.push(perm);
            }
        }
        out
    }
    let mut orders = vec![Vec::new()];
    for g in groups {
        let perms = permutations(&g);
        let mut next = Vec::with_capacity(orders.len() * perms.len());
        for prefix in &orders {
            for perm in &perms {
                let mut o = prefix.clone();
                o.extend_from_slice(perm);
                next.push(o);
            }
        }
        orders = next;
    }
    orders
}

/// The classical single-scan greedy for linear optimization over a
/// delta-matroid, with the default tie order.
pub fn dm_greedy(d: &DeltaMatroid, c: &[Value]) -> Result<(SubsetMask, Value), DmError> {
    let order = greedy_order(c);
    dm_greedy_with_order(d, c, &order)
}

/// The greedy scan under an explicit processing order. Elements with
/// negative weight are taken when some completion over later elements
/// stays feasible; elements with nonnegative weight are taken only when
/// no completion without them exists.
pub fn dm_greedy_with_order(
    d: &DeltaMatroid,
    c: &[Value],
    order: &[usize],
) -> Result<(SubsetMask, Value), DmError> {
    check_weights(d, c)?;
    let mut chosen: SubsetMask = 0;
    let mut processed: SubsetMask = 0;
    for &i in order {
        let bit = 1 << i;
        processed |= bit;
        if c[i] < Value::ZERO {
            let target = chosen | bit;
            if d.family().iter().any(|&m| m & processed == target) {
                chosen = target;
            }
        } else if !d.family().iter().any(|&m| m & processed == chosen) {
            chosen |= bit;
        }
    }
    debug_assert!(d.is_feasible(chosen));
    Ok((chosen, subset_cost(c, chosen)))
}

/// Minimum cost over the family by enumeration; the oracle for (DM).
pub fn dm_brute_force(d: &DeltaMatroid, c: &[Value]) -> Result<(SubsetMask, Value), DmError> {
    check_weights(d, c)?;
    let best = d
        .family()
        .iter()
        .map(|&m| (subset_cost(c, m), m))
        .min()
        .expect("family is nonempty");
    Ok((best.1, best.0))
}

/// Nearest-optimal data for (DM), by enumeration.
#[derive(Clone, Debug)]
pub struct DmProfile {
    opt_cost: Value,
    opt_sets: Vec<SubsetMask>,
}

impl DmProfile {
    pub fn build(d: &DeltaMatroid, c: &[Value]) -> Result<Self, DmError> {
        check_weights(d, c)?;
        let opt_cost = d
            .family()
            .iter()
            .map(|&m| subset_cost(c, m))
            .min()
            .expect("family is nonempty");
        let opt_sets = d
            .family()
            .iter()
            .copied()
            .filter(|&m| subset_cost(c, m) == opt_cost)
            .collect();
        Ok(DmProfile { opt_cost, opt_sets })
    }

    pub fn opt_cost(&self) -> Value {
        self.opt_cost
    }

    pub fn opt_sets(&self) -> &[SubsetMask] {
        &self.opt_sets
    }

    /// µ_DM(F) = min |F Δ F*| over optimal F*.
    pub fn mu_dm(&self, mask: SubsetMask) -> u32 {
        self.opt_sets
            .iter()
            .map(|&m| (m ^ mask).count_ones())
            .min()
            .expect("optimal set is nonempty")
    }

    /// M*_DM(F): optimal sets at symmetric-difference distance µ_DM(F).
    pub fn m_star_dm(&self, mask: SubsetMask) -> Vec<SubsetMask> {
        let mu = self.mu_dm(mask);
        self.opt_sets
            .iter()
            .copied()
            .filter(|&m| (m ^ mask).count_ones() == mu)
            .collect()
    }
}

/// µ_DM(F) computed from scratch.
pub fn mu_dm(d: &DeltaMatroid, c: &[Value], mask: SubsetMask) -> Result<u32, DmError> {
    Ok(DmProfile::build(d, c)?.mu_dm(mask))
}

/// M*_DM(F) computed from scratch.
pub fn m_star_dm(
    d: &DeltaMatroid,
    c: &[Value],
    mask: SubsetMask,
) -> Result<Vec<SubsetMask>, DmError> {
    Ok(DmProfile::build(d, c)?.m_star_dm(mask))
}

/// No feasible move F Δ {i, j} improves the cost.
pub fn dm_is_locally_optimal(d: &DeltaMatroid, c: &[Value], mask: SubsetMask) -> bool {
    let cost = subset_cost(c, mask);
    for i in 0..d.ground_size() {
        for j in i..d.ground_size() {
            let flip = (1u32 << i) | (1 << j);
            let moved = mask ^ flip;
            if d.is_feasible(moved) && subset_cost(c, moved) < cost {
                return false;
            }
        }
    }
    true
}

/// Every (i*, j*) pair the refined exchange algorithm may take from F:
/// i* ranges over the full argmin of c(F Δ {i}) among elements that admit
/// an improving feasible partner, and j* = i* when the single flip is
/// feasible, otherwise the full argmin of c(F Δ {i*, j}) over feasible
/// partners.
pub fn dm_refined_choices(
    d: &DeltaMatroid,
    c: &[Value],
    mask: SubsetMask,
) -> Result<Vec<(usize, usize)>, DmError> {
    check_weights(d, c)?;
    if !d.is_feasible(mask) {
        return Err(DmError::StartInfeasible { mask });
    }
    let n = d.ground_size();
    let cost = subset_cost(c, mask);
    let mut best: Option<Value> = None;
    let mut dirs: Vec<usize> = Vec::new();
    for i in 0..n {
        let admits = (0..n).any(|j| {
            let moved = mask ^ ((1u32 << i) | (1 << j));
            d.is_feasible(moved) && subset_cost(c, moved) < cost
        });
        if !admits {
            continue;
        }
        let flip_cost = subset_cost(c, mask ^ (1 << i));
        match best {
            Some(b) if flip_cost > b => {}
            Some(b) if flip_cost == b => dirs.push(i),
            _ => {
                best = Some(flip_cost);
                dirs = vec![i];
            }
        }
    }
    if dirs.is_empty() {
        return Err(DmError::LocallyOptimal { mask });
    }
    let mut out = Vec::new();
    for i in dirs {
        if d.is_feasible(mask ^ (1 << i)) {
            out.push((i, i));
            continue;
        }
        let mut best_j: Option<Value> = None;
        let mut ties = Vec::new();
        for j in (0..n).filter(|&j| j != i) {
            let moved = mask ^ ((1u32 << i) | (1 << j));
            if !d.is_feasible(moved) {
                continue;
            }
            let mc = subset_cost(c, moved);
            match best_j {
                Some(b) if mc > b => {}
                Some(b) if mc == b => ties.push(j),
                _ => {
                    best_j = Some(mc);
                    ties = vec![j];
                }
            }
        }
        debug_assert!(best_j.is_some());
        for j in ties {
            out.push((i, j));
        }
    }
    Ok(out)
}

/// One step of a refined exchange run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmStep {
    pub from: SubsetMask,
    pub i_star: usize,
    pub j_star: usize,
    pub cost_before: Value,
    pub cost_after: Value,
}

/// The trajectory of one refined exchange run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmTrace {
    pub start: SubsetMask,
    pub steps: Vec<DmStep>,
    pub final_set: SubsetMask,
    pub final_cost: Value,
}

impl DmTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// The refined exchange algorithm with smallest-index tie-breaking:
/// repeatedly apply F := F Δ {i*, j*} until no feasible move improves.
pub fn dm_refined_greedy(
    d: &DeltaMatroid,
    c: &[Value],
    start: SubsetMask,
) -> Result<DmTrace, DmError> {
    check_weights(d, c)?;
    if !d.is_feasible(start) {
        return Err(DmError::StartInfeasible { mask: start });
    }
    let mut current = start;
    let mut steps = Vec::new();
    while !dm_is_locally_optimal(d, c, current) {
        let (i, j) = dm_refined_choices(d, c, current)?[0];
        let next = current ^ ((1u32 << i) | (1 << j));
        let cost_before = subset_cost(c, current);
        let cost_after = subset_cost(c, next);
        debug_assert!(cost_after < cost_before);
        steps.push(DmStep {
            from: current,
            i_star: i,
            j_star: j,
            cost_before,
            cost_after,
        });
        current = next;
    }
    Ok(DmTrace {
        start,
        steps,
        final_set: current,
        final_cost: subset_cost(c, current),
    })
}

/// Whether a nearest-optimal set survives the step F → F Δ {i*, j*}:
/// flipped elements must move toward F*.
fn survives(from: SubsetMask, opt: SubsetMask, k: usize) -> bool {
    let bit = 1u32 << k;
    if from & bit != 0 {
        opt & bit == 0
    } else {
        opt & bit != 0
    }
}

/// A violation of the delta-matroid geodesic property at one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmViolation {
    pub at: SubsetMask,
    pub i_star: usize,
    pub j_star: usize,
    pub detail: String,
}

impl fmt::Display for DmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {} with (i*={}, j*={}): {}",
            format_subset(self.at),
            self.i_star + 1,
            self.j_star + 1,
            self.detail
        )
    }
}

fn check_cor3_step(
    profile: &DmProfile,
    from: SubsetMask,
    i: usize,
    j: usize,
) -> Result<(), String> {
    let next = from ^ ((1u32 << i) | (1 << j));
    let mu_before = profile.mu_dm(from);
    let mu_after = profile.mu_dm(next);
    let drop = if i == j { 1 } else { 2 };
    if mu_after + drop != mu_before {
        return Err(format!(
            "µ_DM went {mu_before} -> {mu_after}, expected drop {drop}"
        ));
    }
    let filtered: Vec<SubsetMask> = profile
        .m_star_dm(from)
        .into_iter()
        .filter(|&opt| survives(from, opt, i) && survives(from, opt, j))
        .collect();
    if filtered != profile.m_star_dm(next) {
        return Err("M*_DM recursion mismatch".into());
    }
    Ok(())
}

/// Per-step geodesic check of a concrete refined exchange trace.
pub fn verify_corollary3_trace(profile: &DmProfile, trace: &DmTrace) -> Result<(), DmViolation> {
    for step in &trace.steps {
        check_cor3_step(profile, step.from, step.i_star, step.j_star).map_err(|detail| {
            DmViolation {
                at: step.from,
                i_star: step.i_star,
                j_star: step.j_star,
                detail,
            }
        })?;
    }
    Ok(())
}

/// Exhaustive geodesic check: for every feasible non-optimal F and every
/// valid (i*, j*) tie branch, the µ_DM drop and the M*_DM recursion hold.
pub fn verify_corollary3_sweep(d: &DeltaMatroid, c: &[Value]) -> Result<(), DmViolation> {
    let profile = DmProfile::build(d, c).map_err(|e| DmViolation {
        at: 0,
        i_star: 0,
        j_star: 0,
        detail: e.to_string(),
    })?;
    for &mask in d.family() {
        if subset_cost(c, mask) == profile.opt_cost() {
            continue;
        }
        let choices = dm_refined_choices(d, c, mask).map_err(|e| DmViolation {
            at: mask,
            i_star: 0,
            j_star: 0,
            detail: e.to_string(),
        })?;
        for (i, j) in choices {
            check_cor3_step(&profile, mask, i, j).map_err(|detail| DmViolation {
                at: mask,
                i_star: i,
                j_star: j,
                detail,
            })?;
        }
    }
    Ok(())
}

/// All nonempty families over {1..n}, as family codes: bit k of the code
/// is set iff subset-mask k belongs to the family.
pub fn enumerate_families(n: usize) -> Result<impl Iterator<Item = DeltaMatroid>, DmError> {
    if n > MAX_ENUM_GROUND {
        return Err(DmError::EnumTooLarge {
            max: MAX_ENUM_GROUND,
        });
    }
    let subsets = 1usize << n;
    let codes = 1u64 << subsets;
    Ok((1..codes).map(move |code| {
        let family: Vec<SubsetMask> = (0..subsets as u32)
            .filter(|&k| code & (1 << k) != 0)
            .collect();
        DeltaMatroid::new(n, family).expect("masks are in range")
    }))
}

/// All delta-matroids over {1..n} in ascending family-code order:
/// the nonempty families passing the symmetric exchange axiom.
pub fn enumerate_delta_matroids(n: usize) -> Result<Vec<DeltaMatroid>, DmError> {
    if n > MAX_ENUM_GROUND {
        return Err(DmError::EnumTooLarge {
            max: MAX_ENUM_GROUND,
        });
    }
    let subsets = 1usize << n;
    let codes: Vec<u64> = (1..(1u64 << subsets)).collect();
    Ok(codes
        .into_par_iter()
        .filter_map(|code| {
            let family: Vec<SubsetMask> = (0..subsets as u32)
                .filter(|&k| code & (1 << k) != 0)
                .collect();
            let d = DeltaMatroid::new(n, family).expect("masks are in range");
            d.verify_symmetric_exchange().is_ok().then_some(d)
        })
        .collect())
}
