//! Benchmarks for the feasible crates.
