//! Criterion benchmarks for the weak-value engine live in `benches/`.
