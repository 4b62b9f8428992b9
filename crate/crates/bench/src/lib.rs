//! Benchmarks for the hypvortex kernels; see `benches/kernels.rs`.
