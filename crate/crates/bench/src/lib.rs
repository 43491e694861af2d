//! Criterion benchmarks for kirillov-core live under `benches/`.
