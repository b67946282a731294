//! Benchmarks for the hot paths: exact search, strategy generation,
//! sequence terms, and witness replay.
//!
//! The solve group uses a reduced sample size — each iteration runs a full
//! iterative-deepening search — so `cargo bench` finishes in seconds while
//! still flagging order-of-magnitude regressions.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cookie_monster::{
    best_strategy, nacci_strategy, solve, verify_sequence, JarState, NacciFamily, SolverConfig,
};

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(20);
    let cases: [(&str, &[u64]); 4] = [
        ("staircase_7", &[1, 2, 3, 4, 5, 6, 7]),
        ("fibonacci_7", &[1, 2, 3, 5, 8, 13, 21]),
        ("tribonacci_6", &[1, 2, 4, 7, 13, 24]),
        ("tetranacci_6", &[1, 2, 4, 8, 15, 29]),
    ];
    for (name, values) in cases {
        let state = JarState::canonicalize(values.iter().copied());
        let config = SolverConfig::default();
        group.bench_with_input(BenchmarkId::from_parameter(name), &state, |b, state| {
            b.iter(|| solve(black_box(state), &config).unwrap().cm)
        });
    }
    group.finish();
}

fn bench_strategies(c: &mut Criterion) {
    let fib_20 = NacciFamily::new(2).unwrap().jar_set(20).unwrap();
    c.bench_function("best_strategy/fibonacci_20", |b| {
        b.iter(|| best_strategy(black_box(&fib_20)).length)
    });
    c.bench_function("nacci_strategy/order3_k30", |b| {
        b.iter(|| nacci_strategy(black_box(3), black_box(30)).unwrap().length)
    });
}

fn bench_sequences(c: &mut Criterion) {
    c.bench_function("jar_set/order5_k30", |b| {
        let family = NacciFamily::new(5).unwrap();
        b.iter(|| family.jar_set(black_box(30)).unwrap().len())
    });
}

fn bench_verify(c: &mut Criterion) {
    let trace = nacci_strategy(2, 60).unwrap();
    let source = trace.sequence.source.clone();
    c.bench_function("verify_sequence/fibonacci_60", |b| {
        b.iter(|| {
            verify_sequence(black_box(&source), black_box(&trace.sequence.moves))
                .unwrap()
                .empties
        })
    });
}

criterion_group!(
    benches,
    bench_solve,
    bench_strategies,
    bench_sequences,
    bench_verify
);
criterion_main!(benches);
