//! Benchmark fixtures.

use mbrainbow::lab::generate_random_system;
use mbrainbow::ColoredSubgraph;

/// A random `s`-layer system on `n` vertices, dense enough to be rainbow
/// connected most of the time.
pub fn dense_system(n: usize, s: usize, seed: u64) -> ColoredSubgraph {
    let p = (4.0 * (n as f64).ln() / n as f64).powf(1.0 / s as f64).min(1.0);
    generate_random_system(n, s, p, seed).expect("valid p")
}

/// A sparse system with `n - 1` layers, the spanning tree setting.
pub fn tree_system(n: usize, seed: u64) -> ColoredSubgraph {
    generate_random_system(n, n - 1, 3.0 / n as f64, seed).expect("valid p")
}
