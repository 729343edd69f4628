use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stackstop::oracle::{enumerate_exact_capped, simulate_with, MAX_ENUMERATION_N};
use stackstop::{solve_game, DecisionRule, Execution};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn monte_carlo(c: &mut Criterion) {
    let g = solve_game::<f64>(50).unwrap();
    let p1 = DecisionRule::p1_threshold(g.n_star);
    let p2 = DecisionRule::p2_optimal(&g);
    let trials = 100_000;
    let mut group = c.benchmark_group("simulate_n50");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| simulate_with(50, &p1, &p2, black_box(trials), 1, exec, 64).unwrap())
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let g = solve_game::<f64>(9).unwrap();
    let p1 = DecisionRule::p1_threshold(g.n_star);
    let p2 = DecisionRule::p2_optimal(&g);
    let mut group = c.benchmark_group("enumerate_n9");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_exact_capped(black_box(9), &p1, &p2, MAX_ENUMERATION_N, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, enumeration);
criterion_main!(benches);
