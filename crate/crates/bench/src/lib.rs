//! Criterion benchmarks for `lpfsieve-core`; see `benches/sieve.rs`.
