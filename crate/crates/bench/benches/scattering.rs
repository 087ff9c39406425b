use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use wgdp_bench::{bare_point, cavity_point, cavity_problem, small_fig4};
use wgdp_core::optimize::optimize_cavity;
use wgdp_core::oracle::{build_cavity_system, solve};
use wgdp_core::sweep::Execution;
use wgdp_core::{bare_dp, cavity_dp};

fn closed_forms(c: &mut Criterion) {
    let bare = bare_point();
    let cavity = cavity_point();
    c.bench_function("bare_dp", |b| b.iter(|| bare_dp(black_box(&bare))));
    c.bench_function("cavity_dp", |b| b.iter(|| cavity_dp(black_box(&cavity))));
}

fn oracle(c: &mut Criterion) {
    let system = build_cavity_system(&cavity_point());
    c.bench_function("oracle_solve_5x5", |b| b.iter(|| solve(black_box(&system))));
}

fn sweeps(c: &mut Criterion) {
    let preset = small_fig4(51);
    let mut group = c.benchmark_group("fig4_51x51");
    group.bench_function("serial", |b| b.iter(|| preset.run_with(Execution::Serial)));
    group.bench_function("parallel", |b| {
        b.iter(|| preset.run_with(Execution::Parallel))
    });
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let problem = cavity_problem();
    let mut group = c.benchmark_group("optimize");
    group.sample_size(10);
    group.bench_function("cavity_v_g", |b| {
        b.iter(|| optimize_cavity(black_box(&problem)))
    });
    group.finish();
}

criterion_group!(benches, closed_forms, oracle, sweeps, optimizer);
criterion_main!(benches);
