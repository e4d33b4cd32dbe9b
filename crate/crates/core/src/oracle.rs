//! Brute-force reference for the maximum balanced subgraph.
//!
//! Deliberately naive: enumerate edge subsets, keep the largest whose
//! in-degrees equal out-degrees everywhere. Shares no ideas with the
//! solvers so agreement is meaningful evidence. Only the edges inside
//! strongly connected components are enumerated; a balanced subgraph
//! splits into cycles and a cycle never crosses components.

use crate::error::EulerError;
use crate::graph::{DirectedGraph, EdgeSet};
use crate::scc::scc_decompose;

pub const ORACLE_DEFAULT_EDGE_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub best_size: usize,
    /// Lexicographically smallest witness among the maximum-size subsets:
    /// reproducible across runs.
    pub witness: EdgeSet,
    /// Subsets whose balance was actually evaluated (pruning skips the
    /// rest).
    pub subsets_examined: u64,
}

pub fn brute_force_max_euler(g: &DirectedGraph) -> Result<OracleResult, EulerError> {
    brute_force_max_euler_capped(g, ORACLE_DEFAULT_EDGE_CAP)
}

/// `cap` bounds the number of enumerated (component-internal) edges, i.e.
/// the exponent of the search.
pub fn brute_force_max_euler_capped(
    g: &DirectedGraph,
    cap: usize,
) -> Result<OracleResult, EulerError> {
    let part = scc_decompose(g);
    let candidates: Vec<usize> = (0..g.edge_count())
        .filter(|&e| {
            let (u, v) = g.edge(e);
            part.component_of(u) == part.component_of(v)
        })
        .collect();
    if candidates.len() > cap {
        return Err(EulerError::EdgeCapExceeded {
            m: candidates.len(),
            cap,
        });
    }
    Ok(enumerate(g, &candidates, true))
}

/// Pure enumeration over all 2^m subsets with no pruning at all; the
/// self-check partner for the capped variant. Keep m small.
pub fn brute_force_max_euler_unpruned(g: &DirectedGraph) -> OracleResult {
    let candidates: Vec<usize> = (0..g.edge_count()).collect();
    enumerate(g, &candidates, false)
}

fn enumerate(g: &DirectedGraph, candidates: &[usize], prune: bool) -> OracleResult {
    let k = candidates.len();
    assert!(k < 64, "subset enumeration needs fewer than 64 edges");
    let mut balance = vec![0i32; g.vertex_count()];
    let mut touched: Vec<u32> = Vec::with_capacity(k * 2);
    let mut best_mask = 0u64;
    let mut best_size = 0u32;
    let mut subsets_examined = 0u64;
    for mask in 0u64..(1u64 << k) {
        let size = mask.count_ones();
        if prune && size <= best_size {
            continue;
        }
        subsets_examined += 1;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (u, v) = g.edge(candidates[i]);
            if balance[u.index()] == 0 {
                touched.push(u.0);
            }
            if balance[v.index()] == 0 {
                touched.push(v.0);
            }
            balance[u.index()] += 1;
            balance[v.index()] -= 1;
        }
        let balanced = touched.iter().all(|&v| balance[v as usize] == 0);
        for &v in &touched {
            balance[v as usize] = 0;
        }
        touched.clear();
        // Strict improvement keeps the smallest qualifying mask as the
        // witness, so results are reproducible.
        if balanced && size > best_size {
            best_size = size;
            best_mask = mask;
        }
    }
    let witness = EdgeSet::from_indices(
        g.edge_count(),
        (0..k).filter(|&i| best_mask >> i & 1 == 1).map(|i| candidates[i]),
    );
    debug_assert!(g.is_eulerian(&witness));
    OracleResult {
        best_size: best_size as usize,
        witness,
        subsets_examined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn triangle_is_kept_whole() {
        let g = DirectedGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        let best = brute_force_max_euler(&g).unwrap();
        assert_eq!(best.best_size, 3);
        assert_eq!(best.witness.len(), 3);
    }

    #[test]
    fn acyclic_graph_keeps_nothing() {
        let g = DirectedGraph::from_pairs(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let best = brute_force_max_euler(&g).unwrap();
        assert_eq!(best.best_size, 0);
        assert!(best.witness.is_empty());
        // Nothing is component-internal and the running best already starts
        // at the empty set, so pruning evaluates no subset at all.
        assert_eq!(best.subsets_examined, 0);
    }

    #[test]
    fn overlapping_triangles_keep_one() {
        let g = DirectedGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)]);
        let best = brute_force_max_euler(&g).unwrap();
        assert_eq!(best.best_size, 3);
        // Smallest witness mask prefers the lexicographically first edges.
        assert_eq!(best.witness.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn figure_eight_is_kept_whole() {
        let g = DirectedGraph::from_pairs(
            5,
            &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)],
        );
        assert_eq!(brute_force_max_euler(&g).unwrap().best_size, 6);
    }

    #[test]
    fn cap_is_enforced_on_internal_edges_only() {
        // Triangle plus a long dangling chain: only the triangle counts.
        let g = DirectedGraph::from_pairs(
            6,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)],
        );
        assert_eq!(brute_force_max_euler_capped(&g, 3).unwrap().best_size, 3);
        let err = brute_force_max_euler_capped(&g, 2).unwrap_err();
        assert!(matches!(err, EulerError::EdgeCapExceeded { m: 3, cap: 2 }));
    }

    #[test]
    fn pruned_and_unpruned_agree_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..60 {
            let n = rng.gen_range(2..=5u32);
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.gen_bool(0.35) {
                        pairs.push((u, v));
                    }
                }
            }
            pairs.truncate(10);
            let g = DirectedGraph::from_pairs(n as usize, &pairs);
            let pruned = brute_force_max_euler(&g).unwrap();
            let plain = brute_force_max_euler_unpruned(&g);
            assert_eq!(pruned.best_size, plain.best_size, "graph {pairs:?}");
            assert!(
                pruned.subsets_examined <= plain.subsets_examined,
                "pruning examined more subsets than plain enumeration"
            );
            assert!(g.is_eulerian(&pruned.witness));
            assert!(g.is_eulerian(&plain.witness));
        }
    }

    #[test]
    fn size_is_invariant_under_relabeling() {
        let g = DirectedGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)]);
        // Relabel via v -> (v + 2) % 4.
        let h = DirectedGraph::from_pairs(4, &[(2, 3), (3, 0), (0, 2), (3, 1), (1, 2)]);
        assert_eq!(
            brute_force_max_euler(&g).unwrap().best_size,
            brute_force_max_euler(&h).unwrap().best_size
        );
    }
}
