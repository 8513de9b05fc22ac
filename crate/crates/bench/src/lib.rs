//! Criterion benchmarks for ddkg-core; see benches/.
