//! Integer-vector primitives: points, unit steps, the increment-direction
//! set `inc(x, y)`, and the target region `S(x; s, t)`.

use std::fmt;
use std::ops::Index;

use crate::error::{DimensionMismatch, SRegionError};

/// A point of the integer lattice Z^n.
///
/// Coordinates are reported 1-based in output and in file formats; the
/// `coords` slice itself is 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    coords: Vec<i64>,
}

impl Point {
    pub fn new(coords: Vec<i64>) -> Self {
        Point { coords }
    }

    pub fn zero(dim: usize) -> Self {
        Point {
            coords: vec![0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// L1 norm.
    pub fn norm1(&self) -> u64 {
        self.coords.iter().map(|c| c.unsigned_abs()).sum()
    }

    pub fn step(&self, s: UnitStep) -> Point {
        let mut coords = self.coords.clone();
        match s {
            UnitStep::Zero => {}
            UnitStep::Plus(i) => coords[i] += 1,
            UnitStep::Minus(i) => coords[i] -= 1,
        }
        Point { coords }
    }

    pub fn step_pair(&self, pair: StepPair) -> Point {
        self.step(pair.s).step(pair.t)
    }

    fn check_dim(&self, other: &Point) -> Result<(), DimensionMismatch> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }
}

impl Index<usize> for Point {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.coords[i]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<&[i64]> for Point {
    fn from(coords: &[i64]) -> Self {
        Point::new(coords.to_vec())
    }
}

impl<const N: usize> From<[i64; N]> for Point {
    fn from(coords: [i64; N]) -> Self {
        Point::new(coords.to_vec())
    }
}

/// An element of U ∪ {0}: the zero vector, or ±χ_i.
///
/// Kept symbolic rather than as a dense vector so that step identity is
/// checkable by construction. Indices are 0-based here, 1-based in display.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitStep {
    Zero,
    Plus(usize),
    Minus(usize),
}

impl UnitStep {
    /// Coordinate the step acts on; `None` for the zero step.
    pub fn support(&self) -> Option<usize> {
        match self {
            UnitStep::Zero => None,
            UnitStep::Plus(i) | UnitStep::Minus(i) => Some(*i),
        }
    }

    pub fn signum(&self) -> i64 {
        match self {
            UnitStep::Zero => 0,
            UnitStep::Plus(_) => 1,
            UnitStep::Minus(_) => -1,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, UnitStep::Zero)
    }

    pub fn norm1(&self) -> u64 {
        if self.is_zero() {
            0
        } else {
            1
        }
    }

    pub fn negated(&self) -> UnitStep {
        match *self {
            UnitStep::Zero => UnitStep::Zero,
            UnitStep::Plus(i) => UnitStep::Minus(i),
            UnitStep::Minus(i) => UnitStep::Plus(i),
        }
    }

    /// Canonical order: 0 first, then by coordinate index with + before −.
    /// This is the tie-breaking order used throughout the solvers.
    fn rank(&self) -> usize {
        match *self {
            UnitStep::Zero => 0,
            UnitStep::Plus(i) => 1 + 2 * i,
            UnitStep::Minus(i) => 2 + 2 * i,
        }
    }

    /// All 2n unit steps in canonical order: +χ₁, −χ₁, +χ₂, …
    pub fn all(dim: usize) -> impl Iterator<Item = UnitStep> {
        (0..dim).flat_map(|i| [UnitStep::Plus(i), UnitStep::Minus(i)])
    }

    /// U ∪ {0} in canonical order.
    pub fn all_with_zero(dim: usize) -> impl Iterator<Item = UnitStep> {
        std::iter::once(UnitStep::Zero).chain(UnitStep::all(dim))
    }
}

impl PartialOrd for UnitStep {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for UnitStep {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl fmt::Display for UnitStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            UnitStep::Zero => write!(f, "0"),
            UnitStep::Plus(i) => write!(f, "+x{}", i + 1),
            UnitStep::Minus(i) => write!(f, "-x{}", i + 1),
        }
    }
}

impl fmt::Debug for UnitStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The pair (s, t) applied in one solver step. Emitted steps always have
/// s + t ≠ 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepPair {
    pub s: UnitStep,
    pub t: UnitStep,
}

impl StepPair {
    pub fn new(s: UnitStep, t: UnitStep) -> Self {
        StepPair { s, t }
    }

    /// L1 length of s + t (0, 1, or 2).
    pub fn norm1(&self) -> u64 {
        if self.cancels() {
            0
        } else {
            self.s.norm1() + self.t.norm1()
        }
    }

    pub fn cancels(&self) -> bool {
        self.s == self.t.negated()
    }
}

impl fmt::Display for StepPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(s={}, t={})", self.s, self.t)
    }
}

impl fmt::Debug for StepPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// L1 distance Σ|x(i) − y(i)|.
pub fn l1_distance(x: &Point, y: &Point) -> Result<u64, DimensionMismatch> {
    x.check_dim(y)?;
    Ok(x.coords()
        .iter()
        .zip(y.coords())
        .map(|(a, b)| a.abs_diff(*b))
        .sum())
}

/// The increment-direction set inc(x, y): the unit steps s with
/// ‖(x + s) − y‖₁ = ‖x − y‖₁ − 1, i.e. +χ_i where y(i) > x(i) and −χ_i
/// where y(i) < x(i). Returned in canonical order; empty iff x = y.
pub fn inc(x: &Point, y: &Point) -> Result<Vec<UnitStep>, DimensionMismatch> {
    x.check_dim(y)?;
    let mut steps = Vec::new();
    for (i, (a, b)) in x.coords().iter().zip(y.coords()).enumerate() {
        if b > a {
            steps.push(UnitStep::Plus(i));
        } else if b < a {
            steps.push(UnitStep::Minus(i));
        }
    }
    Ok(steps)
}

/// Membership of y in the target region S(x; s, t): the points whose L1
/// distance to x + s + t is exactly ‖s + t‖₁ smaller than their distance
/// to x. Evaluated by the 8-case coordinate formula.
pub fn in_s_region(y: &Point, x: &Point, s: UnitStep, t: UnitStep) -> Result<bool, SRegionError> {
    y.check_dim(x)?;
    let pair = StepPair::new(s, t);
    if pair.cancels() {
        return Err(SRegionError::ZeroDirection { s, t });
    }
    // orient so the first component is nonzero
    let (s, t) = if s.is_zero() { (t, s) } else { (s, t) };
    let ok_one = |step: UnitStep, shift: i64| -> bool {
        match step {
            UnitStep::Plus(i) => y[i] >= x[i] + shift,
            UnitStep::Minus(i) => y[i] <= x[i] - shift,
            UnitStep::Zero => unreachable!(),
        }
    };
    Ok(match (s, t) {
        (_, UnitStep::Zero) => ok_one(s, 1),
        _ if s == t => ok_one(s, 2),
        _ => ok_one(s, 1) && ok_one(t, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coords: &[i64]) -> Point {
        Point::from(coords)
    }

    #[test]
    fn l1_distance_examples() {
        assert_eq!(l1_distance(&p(&[0, 0]), &p(&[3, 0])).unwrap(), 3);
        assert_eq!(l1_distance(&p(&[1, 1]), &p(&[1, 1])).unwrap(), 0);
        assert_eq!(l1_distance(&p(&[1, 1]), &p(&[0, 3])).unwrap(), 3);
    }

    #[test]
    fn l1_distance_dimension_mismatch() {
        assert!(l1_distance(&p(&[0]), &p(&[0, 0])).is_err());
    }

    #[test]
    fn inc_examples() {
        assert_eq!(
            inc(&p(&[0, 0]), &p(&[3, 0])).unwrap(),
            vec![UnitStep::Plus(0)]
        );
        assert!(inc(&p(&[2, 5]), &p(&[2, 5])).unwrap().is_empty());
        assert_eq!(
            inc(&p(&[1, 1]), &p(&[0, 3])).unwrap(),
            vec![UnitStep::Minus(0), UnitStep::Plus(1)]
        );
    }

    #[test]
    fn s_region_examples() {
        // s = +χ₁, t = 0: needs y(1) ≥ x(1) + 1
        assert!(in_s_region(&p(&[3, 0]), &p(&[0, 0]), UnitStep::Plus(0), UnitStep::Zero).unwrap());
        // s = +χ₁, t = +χ₂: needs y(2) ≥ 1 too
        assert!(!in_s_region(
            &p(&[1, 0]),
            &p(&[0, 0]),
            UnitStep::Plus(0),
            UnitStep::Plus(1)
        )
        .unwrap());
        // s = t = +χ₁: needs y(1) ≥ x(1) + 2
        assert!(in_s_region(
            &p(&[3, 0]),
            &p(&[1, 0]),
            UnitStep::Plus(0),
            UnitStep::Plus(0)
        )
        .unwrap());
    }

    #[test]
    fn s_region_rejects_cancelling_steps() {
        let x = p(&[0, 0]);
        assert!(in_s_region(&x, &x, UnitStep::Zero, UnitStep::Zero).is_err());
        assert!(in_s_region(&x, &x, UnitStep::Plus(1), UnitStep::Minus(1)).is_err());
    }

    #[test]
    fn canonical_step_order() {
        let steps: Vec<_> = UnitStep::all_with_zero(2).collect();
        assert_eq!(
            steps,
            vec![
                UnitStep::Zero,
                UnitStep::Plus(0),
                UnitStep::Minus(0),
                UnitStep::Plus(1),
                UnitStep::Minus(1),
            ]
        );
        let mut sorted = steps.clone();
        sorted.sort();
        assert_eq!(sorted, steps);
    }

    /// Direct evaluation of the distance identity defining S(x; s, t),
    /// independent of the case formula.
    fn s_region_by_distance(y: &Point, x: &Point, s: UnitStep, t: UnitStep) -> bool {
        let moved = x.step(s).step(t);
        let lhs = l1_distance(y, &moved).unwrap();
        let rhs = l1_distance(y, x).unwrap() as i64 - StepPair::new(s, t).norm1() as i64;
        lhs as i64 == rhs
    }

    #[test]
    fn s_region_matches_distance_identity_on_a_box() {
        // exhaustive cross-check over a small 2-d box
        for x1 in -2..=2i64 {
            for x2 in -2..=2i64 {
                let x = p(&[x1, x2]);
                for s in UnitStep::all_with_zero(2) {
                    for t in UnitStep::all_with_zero(2) {
                        if StepPair::new(s, t).cancels() {
                            continue;
                        }
                        for y1 in -4..=4i64 {
                            for y2 in -4..=4i64 {
                                let y = p(&[y1, y2]);
                                assert_eq!(
                                    in_s_region(&y, &x, s, t).unwrap(),
                                    s_region_by_distance(&y, &x, s, t),
                                    "y={y} x={x} s={s} t={t}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
