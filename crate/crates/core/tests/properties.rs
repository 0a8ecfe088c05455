//! Property tests for the geometry primitives, the objective identities,
//! the generators, and the solver trace invariants.

use proptest::prelude::*;

use jumpsys_core::generate::{box_system, random_convex_table, random_filtered_system};
use jumpsys_core::geometry::{in_s_region, inc, l1_distance, Point, StepPair, UnitStep};
use jumpsys_core::objective::{
    exchange_inequality_holds, separability_identity_holds, SeparableObjective, UnivariateConvex,
};
use jumpsys_core::oracle::OptimalityProfile;
use jumpsys_core::solver::{
    is_locally_optimal, jsc_greedy_trace, jsc_refined_greedy2_trace, jsc_refined_greedy_trace,
    TStarPolicy,
};
use jumpsys_core::value::Value;

fn arb_point(dim: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec(-6i64..=6, dim).prop_map(Point::new)
}

fn arb_step(dim: usize) -> impl Strategy<Value = UnitStep> {
    (0..dim, prop::bool::ANY).prop_map(|(i, plus)| {
        if plus {
            UnitStep::Plus(i)
        } else {
            UnitStep::Minus(i)
        }
    })
}

fn arb_step_or_zero(dim: usize) -> impl Strategy<Value = UnitStep> {
    prop_oneof![Just(UnitStep::Zero), arb_step(dim)]
}

/// A random separable convex objective covering [-8, 8] per coordinate.
fn arb_objective(dim: usize) -> impl Strategy<Value = SeparableObjective> {
    let term = prop_oneof![
        (-5i64..=5, -5i64..=5).prop_map(|(a, b)| UnivariateConvex::Linear {
            slope: Value::from_int(a),
            intercept: Value::from_int(b),
        }),
        (0i64..=4, -3i64..=3, -5i64..=5).prop_map(|(w, d, b)| UnivariateConvex::Quadratic {
            weight: Value::from_int(w),
            center: Value::from_int(d),
            offset: Value::from_int(b),
        }),
        any::<u64>().prop_map(|seed| UnivariateConvex::Table {
            lo: -8,
            values: random_convex_table(17, seed)
                .into_iter()
                .map(Value::from_int)
                .collect(),
        }),
    ];
    (prop::collection::vec(term, dim), -5i64..=5)
        .prop_map(|(terms, c)| SeparableObjective::new(terms, Value::from_int(c)))
}

proptest! {
    #[test]
    fn inc_steps_reduce_distance_by_one(
        (x, y) in (2usize..=4).prop_flat_map(|d| (arb_point(d), arb_point(d)))
    ) {
        let dist = l1_distance(&x, &y).unwrap();
        let steps = inc(&x, &y).unwrap();
        prop_assert_eq!(steps.is_empty(), x == y);
        for s in steps {
            prop_assert_eq!(l1_distance(&x.step(s), &y).unwrap(), dist - 1);
        }
    }

    #[test]
    fn s_region_matches_the_distance_identity(
        (x, y, s, t) in (2usize..=4).prop_flat_map(|d| {
            (arb_point(d), arb_point(d), arb_step_or_zero(d), arb_step_or_zero(d))
        })
    ) {
        let pair = StepPair::new(s, t);
        prop_assume!(!pair.cancels());
        let by_formula = in_s_region(&y, &x, s, t).unwrap();
        let moved = x.step_pair(pair);
        let by_distance = l1_distance(&y, &moved).unwrap() as i64
            == l1_distance(&y, &x).unwrap() as i64 - pair.norm1() as i64;
        prop_assert_eq!(by_formula, by_distance);
    }

    #[test]
    fn exchange_inequality_holds_for_convex_objectives(
        (f, x, y) in (2usize..=3).prop_flat_map(|d| (arb_objective(d), arb_point(d), arb_point(d)))
    ) {
        prop_assume!(x != y);
        for s in inc(&x, &y).unwrap() {
            prop_assert!(exchange_inequality_holds(&f, &x, &y, s).unwrap());
        }
    }

    #[test]
    fn separability_identity_is_exact(
        (f, x, s, t) in (2usize..=3).prop_flat_map(|d| {
            (arb_objective(d), arb_point(d), arb_step(d), arb_step(d))
        })
    ) {
        prop_assume!(s.support() != t.support());
        // keep x + s + t inside the table domain
        prop_assume!(x.coords().iter().all(|c| c.abs() <= 6));
        prop_assert!(separability_identity_holds(&f, &x, s, t).unwrap());
    }

    #[test]
    fn solver_traces_are_consistent_and_optimal(
        (lo, side, seed, algo) in (
            prop::collection::vec(-2i64..=2, 2),
            1i64..=3,
            any::<u64>(),
            0u8..3,
        )
    ) {
        let hi: Vec<i64> = lo.iter().map(|a| a + side).collect();
        let system = box_system(&lo, &hi).unwrap();
        let f_seed = seed.wrapping_mul(0x9e3779b97f4a7c15);
        let f = SeparableObjective::new(
            vec![
                UnivariateConvex::Table {
                    lo: lo[0] - 1,
                    values: random_convex_table(side as usize + 3, f_seed)
                        .into_iter()
                        .map(Value::from_int)
                        .collect(),
                },
                UnivariateConvex::Quadratic {
                    weight: Value::from_int((seed % 3) as i64),
                    center: Value::from_int((seed % 5) as i64 - 2),
                    offset: Value::ZERO,
                },
            ],
            Value::ZERO,
        );
        let start = system.points()[(seed as usize) % system.len()].clone();
        let trace = match algo {
            0 => jsc_greedy_trace(&system, &f, &start, TStarPolicy::Best),
            1 => jsc_refined_greedy_trace(&system, &f, &start),
            _ => jsc_refined_greedy2_trace(&system, &f, &start),
        }
        .unwrap();
        trace.check_consistency(&system, &f).unwrap();
        prop_assert!(is_locally_optimal(&system, &f, &trace.final_point).unwrap());
        let profile = OptimalityProfile::build(&system, &f).unwrap();
        prop_assert_eq!(trace.final_value, profile.opt_value());
    }

    #[test]
    fn filtered_generator_output_contains_its_points(seed in any::<u64>()) {
        use jumpsys_core::jump_system::JumpSystem;
        let system = random_filtered_system(2, 3, 5, seed, 50_000).unwrap();
        for p in system.points() {
            prop_assert!(system.contains(p).unwrap());
        }
        prop_assert!(system.verify_jexc().is_ok());
    }
}

#[test]
fn psi_zero_iff_singleton() {
    use jumpsys_core::jump_system::ExplicitJumpSystem;
    let singleton = ExplicitJumpSystem::new(vec![Point::from([4, -1])]).unwrap();
    assert_eq!(singleton.psi(), 0);
    let pair = ExplicitJumpSystem::new(vec![Point::from([0, 0]), Point::from([0, 1])]).unwrap();
    assert!(pair.psi() > 0);
}
