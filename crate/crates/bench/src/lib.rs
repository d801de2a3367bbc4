//! Shared fixtures for the criterion benchmarks.

use gtacb_core::harness::generate_modular_graph;
use gtacb_core::Graph;

/// Modular graph with about eight neighbours per node.
pub fn fixture(n: usize, modules: usize) -> Graph {
    let p = (8.0 / (n - 1) as f64).min(1.0);
    generate_modular_graph(n, modules, p, 0.85, 17)
        .expect("valid fixture")
        .0
}
