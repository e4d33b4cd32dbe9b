//! Shared helpers for the solver benchmarks.

use eulerdag::graph::DirectedGraph;
use eulerdag_cli::synth::planted_hierarchy;

/// Deterministic benchmark instance: a planted hierarchy with some
/// fraction of edges pointing against the order.
pub fn bench_graph(n: u32, m: usize, flip_prob: f64, seed: u64) -> DirectedGraph {
    let pairs = planted_hierarchy(n, 6, m, flip_prob, seed);
    DirectedGraph::from_pairs(n as usize, &pairs)
}
