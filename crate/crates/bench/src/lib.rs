//! Criterion benchmarks for the special-function, quadrature and identity kernels; see `benches/kernels.rs`.
