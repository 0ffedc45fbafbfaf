//! Criterion benchmarks for `lissphere`; run with `cargo bench -p lissphere-bench`.
