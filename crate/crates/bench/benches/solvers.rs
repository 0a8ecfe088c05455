use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use jumpsys_core::generate::{box_system, random_graph_system};
use jumpsys_core::geometry::Point;
use jumpsys_core::objective::{SeparableObjective, UnivariateConvex};
use jumpsys_core::oracle::{run_all_sweeps, OptimalityProfile};
use jumpsys_core::solver::jsc_refined_greedy_trace;
use jumpsys_core::value::Value;

fn quadratic_objective(system: &jumpsys_core::ExplicitJumpSystem) -> SeparableObjective {
    SeparableObjective::new(
        system
            .bbox()
            .iter()
            .map(|(lo, hi)| UnivariateConvex::Quadratic {
                weight: Value::ONE,
                center: Value::from_int((lo + hi) / 2),
                offset: Value::ZERO,
            })
            .collect(),
        Value::ZERO,
    )
}

fn bench_refined_solver(c: &mut Criterion) {
    let system = box_system(&[0, 0, 0], &[5, 5, 5]).unwrap();
    let f = quadratic_objective(&system);
    let start = Point::from([0, 0, 0]);
    c.bench_function("refined greedy on a 6x6x6 box", |b| {
        b.iter(|| jsc_refined_greedy_trace(black_box(&system), &f, &start).unwrap())
    });
}

fn bench_jexc_verifier(c: &mut Criterion) {
    let system = random_graph_system(5, 9, 7).unwrap();
    c.bench_function(
        &format!("exchange-axiom check, {} points", system.len()),
        |b| b.iter(|| black_box(&system).verify_jexc().unwrap()),
    );
}

fn bench_materialize(c: &mut Criterion) {
    let graph = jumpsys_core::generate::random_multigraph(5, 12, 3).unwrap();
    c.bench_function("materialize a 12-edge multigraph", |b| {
        b.iter(|| black_box(&graph).materialize(24).unwrap())
    });
}

fn bench_profile_and_sweeps(c: &mut Criterion) {
    let system = random_graph_system(4, 8, 11).unwrap();
    let f = quadratic_objective(&system);
    c.bench_function("optimality profile by enumeration", |b| {
        b.iter(|| OptimalityProfile::build(black_box(&system), &f).unwrap())
    });
    c.bench_function("full theorem sweep on one instance", |b| {
        b.iter(|| run_all_sweeps(black_box(&system), &f).unwrap())
    });
}

criterion_group!(
    benches,
    bench_refined_solver,
    bench_jexc_verifier,
    bench_materialize,
    bench_profile_and_sweeps
);
criterion_main!(benches);
