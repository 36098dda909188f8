//! Shared fixtures for the criterion benches.

use natc_core::benchgen::{generate, Benchmark, BenchmarkSpec};
use natc_core::Circuit;

/// A generated benchmark circuit with a fixed seed.
pub fn fixture(name: Benchmark, n: usize) -> Circuit {
    generate(&BenchmarkSpec { name, n, seed: 1 }).expect("valid benchmark size")
}
