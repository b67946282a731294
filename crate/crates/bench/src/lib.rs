//! Benchmark-only crate; see `benches/solver.rs`. Keeping the benchmarks in
//! their own package keeps criterion and its dependency tree out of the
//! library's build.
