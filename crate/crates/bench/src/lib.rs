//! Benchmark-only crate; see `benches/seeds.rs`.
