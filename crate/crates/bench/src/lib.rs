//! Benchmarks for the spectrum pipeline live under `benches/`.
