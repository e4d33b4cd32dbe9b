//! Fixtures and invariant checks shared by the integration suites.

use rand::rngs::StdRng;
use rand::Rng;
use std::collections::HashSet;

use eulerdag::decomp::{audit_no_negative_cycle, dag_is_acyclic, Decomposition};
use eulerdag::graph::DirectedGraph;

/// The running example graph: a 14-vertex, 22-edge digraph whose maximum
/// balanced part has 16 edges.
pub fn fig_fourteen() -> DirectedGraph {
    DirectedGraph::from_pairs(
        14,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (2, 5),
            (5, 2),
            (3, 5),
            (5, 3),
            (5, 6),
            (6, 7),
            (6, 8),
            (8, 9),
            (9, 10),
            (10, 11),
            (11, 12),
            (12, 5),
            (1, 3),
            (3, 0),
            (7, 3),
            (2, 13),
            (13, 12),
        ],
    )
}

/// Random simple digraph: up to `max_m` distinct non-loop edges over
/// 1..=max_n vertices. Mixed densities; often splits into several strongly
/// connected components.
pub fn random_graph(rng: &mut StdRng, max_n: u32, max_m: usize) -> DirectedGraph {
    let n = rng.gen_range(1..=max_n);
    let possible = (n as usize) * (n as usize - 1);
    let target = rng.gen_range(0..=max_m.min(possible));
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    let mut attempts = 0;
    while pairs.len() < target && attempts < 40 * target + 40 {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && seen.insert((u, v)) {
            pairs.push((u, v));
        }
    }
    DirectedGraph::from_pairs(n as usize, &pairs)
}

/// Full decomposition audit: the two parts partition the edges, the kept
/// part is balanced, the rest is acyclic, and no negative cycle survives
/// under the kept-part orientation.
pub fn assert_valid_decomposition(g: &DirectedGraph, d: &Decomposition) {
    assert_eq!(d.euler.len() + d.dag.len(), g.edge_count(), "partition size");
    assert!(d.euler.is_disjoint(&d.dag), "parts overlap");
    assert!(g.is_eulerian(&d.euler), "kept part unbalanced");
    assert!(dag_is_acyclic(g, &d.dag), "left-over part has a cycle");
    d.check(g).expect("self check");
    assert!(
        audit_no_negative_cycle(g, d),
        "negative cycle under the final orientation"
    );
}
