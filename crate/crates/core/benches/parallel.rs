use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lupi::oracle::brute_force_profile_payoffs_with;
use lupi::*;

fn mixed_profile(n: usize) -> StrategyProfile {
    let rows = (0..n)
        .map(|i| {
            let raw: Vec<f64> = (0..n).map(|k| 1.0 + ((i * 7 + k * 3) % 5) as f64).collect();
            let sum: f64 = raw.iter().sum();
            MixedStrategy::new(raw.into_iter().map(|x| x / sum).collect()).unwrap()
        })
        .collect();
    StrategyProfile::new(rows).unwrap()
}

const MODES: [(&str, Execution); 2] =
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn capped_count_program(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_profile_payoffs");
    group.sample_size(10);
    for n in [8, 10] {
        let profile = mixed_profile(n);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &profile, |b, p| {
                b.iter(|| exact_profile_payoffs_with(black_box(p), exec))
            });
        }
    }
    group.finish();
}

fn brute_force(c: &mut Criterion) {
    let mut group = c.benchmark_group("brute_force_profile_payoffs");
    group.sample_size(10);
    let profile = mixed_profile(7);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 7), &profile, |b, p| {
            b.iter(|| brute_force_profile_payoffs_with(black_box(p), exec))
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    let profile = StrategyProfile::symmetric(geometric_strategy(GameSpec::new(6).unwrap())).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, 500_000), &profile, |b, p| {
            b.iter(|| simulate_with(black_box(p), 500_000, 42, exec).unwrap())
        });
    }
    group.finish();
}

fn exact_solver(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_exact_symmetric");
    group.sample_size(10);
    for (name, execution) in MODES {
        let opts = SolverOptions { execution, ..SolverOptions::default() };
        group.bench_function(BenchmarkId::new(name, 9), |b| {
            b.iter(|| solve_exact_symmetric(GameSpec::new(9).unwrap(), &opts).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, capped_count_program, brute_force, monte_carlo, exact_solver);
criterion_main!(benches);
