//! Criterion benchmarks for the chainlab kernels; see `benches/`.
