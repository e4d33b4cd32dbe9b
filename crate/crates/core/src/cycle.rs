//! Cycle extraction from balanced edge sets and cycle detection in subsets.

use crate::graph::{DirectedGraph, EdgeSet, VertexId};

/// Decomposes a balanced (per-vertex in = out) edge selection into
/// edge-disjoint cycles covering it exactly.
///
/// Walks from the lowest-indexed vertex with remaining out-degree, always
/// taking the first unused out-edge; each revisit of a vertex on the current
/// walk closes one cycle. Panics if `s` is not balanced.
pub fn peel_cycles(g: &DirectedGraph, s: &EdgeSet) -> Vec<Vec<usize>> {
    assert!(g.is_eulerian(s), "peel_cycles requires a balanced edge set");
    let active: Vec<bool> = (0..g.edge_count()).map(|e| s.contains(e)).collect();
    let endpoints: Vec<(u32, u32)> = g.edges().iter().map(|&(u, v)| (u.0, v.0)).collect();
    let cycles = peel_edge_cycles(g.vertex_count(), &endpoints, &active);
    let covered: usize = cycles.iter().map(Vec::len).sum();
    assert_eq!(covered, s.len(), "peeled cycles must cover the set exactly");
    cycles
}

/// Cycle peeling over raw endpoint pairs; tolerates parallel edges. `active`
/// selects the edges to peel and must be balanced at every vertex.
pub(crate) fn peel_edge_cycles(n: usize, endpoints: &[(u32, u32)], active: &[bool]) -> Vec<Vec<usize>> {
    let mut out_adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (e, &(u, _)) in endpoints.iter().enumerate() {
        if active[e] {
            out_adj[u as usize].push(e as u32);
        }
    }
    let mut cursor = vec![0usize; n];
    let mut pos_on_walk: Vec<i64> = vec![-1; n];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    // Walk edges; walk vertex i is the source of walk[i].
    let mut walk: Vec<usize> = Vec::new();

    for start in 0..n as u32 {
        let si = start as usize;
        loop {
            debug_assert!(walk.is_empty());
            if cursor[si] >= out_adj[si].len() {
                break;
            }
            pos_on_walk[si] = 0;
            let mut cur = si;
            loop {
                let list = &out_adj[cur];
                debug_assert!(
                    cursor[cur] < list.len(),
                    "balanced set cannot strand the walk"
                );
                let e = list[cursor[cur]] as usize;
                cursor[cur] += 1;
                walk.push(e);
                let next = endpoints[e].1 as usize;
                if pos_on_walk[next] >= 0 {
                    // Close the cycle that starts where `next` entered the walk.
                    let at = pos_on_walk[next] as usize;
                    let cycle: Vec<usize> = walk.drain(at..).collect();
                    for &ce in &cycle {
                        let tgt = endpoints[ce].1 as usize;
                        if tgt != next {
                            pos_on_walk[tgt] = -1;
                        }
                    }
                    cycles.push(cycle);
                    if walk.is_empty() {
                        pos_on_walk[next] = -1;
                        break;
                    }
                    cur = next;
                } else {
                    pos_on_walk[next] = walk.len() as i64;
                    cur = next;
                }
            }
        }
    }
    cycles
}

/// Finds one simple cycle within `s`, or `None` if the selection is acyclic.
/// Deterministic: roots are scanned in ascending vertex order and edges in
/// adjacency order. Returns the cycle's edges in traversal order.
pub fn find_any_cycle(g: &DirectedGraph, s: &EdgeSet) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    // 0 = unvisited, 1 = on current path, 2 = exhausted.
    let mut color = vec![0u8; n];
    let mut path_pos: Vec<i64> = vec![-1; n];
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut path_edges: Vec<usize> = Vec::new();

    for root in 0..n as u32 {
        if color[root as usize] != 0 {
            continue;
        }
        frames.push((root, 0));
        color[root as usize] = 1;
        path_pos[root as usize] = 0;
        while let Some(&mut (v, ref mut cursor)) = frames.last_mut() {
            let vi = v as usize;
            let mut advanced = false;
            while let Some(&e) = g.out_edges(VertexId(v)).get(*cursor as usize) {
                *cursor += 1;
                let e = e as usize;
                if !s.contains(e) {
                    continue;
                }
                let w = g.edge(e).1 .0 as usize;
                match color[w] {
                    0 => {
                        path_edges.push(e);
                        color[w] = 1;
                        path_pos[w] = path_edges.len() as i64;
                        frames.push((w as u32, 0));
                        advanced = true;
                        break;
                    }
                    1 => {
                        path_edges.push(e);
                        return Some(path_edges.split_off(path_pos[w] as usize));
                    }
                    _ => {}
                }
            }
            if !advanced {
                color[vi] = 2;
                path_pos[vi] = -1;
                frames.pop();
                path_edges.pop();
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set_of(g: &DirectedGraph, ids: &[usize]) -> EdgeSet {
        EdgeSet::from_indices(g.edge_count(), ids.iter().copied())
    }

    #[test]
    fn peels_single_cycle() {
        let g = DirectedGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        let cycles = peel_cycles(&g, &EdgeSet::full(3));
        assert_eq!(cycles, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn peels_figure_eight() {
        // Two cycles sharing vertex 0.
        let g = DirectedGraph::from_pairs(3, &[(0, 1), (1, 0), (0, 2), (2, 0)]);
        let cycles = peel_cycles(&g, &EdgeSet::full(4));
        assert_eq!(cycles.len(), 2);
        let mut all: Vec<usize> = cycles.into_iter().flatten().collect();
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3]);
    }

    #[test]
    fn peels_nested_cycles_with_long_prefix() {
        // Walk from 0 passes through 1 and 2 before the 2->3->2 loop closes;
        // the prefix must stay available for the outer cycle.
        let g = DirectedGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 2), (2, 0)]);
        let cycles = peel_cycles(&g, &EdgeSet::full(5));
        assert_eq!(cycles.len(), 2);
        let covered: usize = cycles.iter().map(Vec::len).sum();
        assert_eq!(covered, 5);
    }

    #[test]
    fn peel_respects_subset() {
        let g = DirectedGraph::from_pairs(3, &[(0, 1), (1, 0), (0, 2)]);
        let cycles = peel_cycles(&g, &edge_set_of(&g, &[0, 1]));
        assert_eq!(cycles, vec![vec![0, 1]]);
    }

    #[test]
    #[should_panic(expected = "balanced")]
    fn peel_rejects_unbalanced() {
        let g = DirectedGraph::from_pairs(2, &[(0, 1)]);
        peel_cycles(&g, &EdgeSet::full(1));
    }

    #[test]
    fn finds_cycle_behind_dead_end() {
        let g = DirectedGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 1)]);
        let cycle = find_any_cycle(&g, &EdgeSet::full(4)).unwrap();
        assert_eq!(cycle, vec![1, 2, 3]);
    }

    #[test]
    fn reports_acyclic() {
        let g = DirectedGraph::from_pairs(3, &[(0, 1), (0, 2), (1, 2)]);
        assert!(find_any_cycle(&g, &EdgeSet::full(3)).is_none());
        // The cycle disappears when its closing edge is excluded.
        let g2 = DirectedGraph::from_pairs(2, &[(0, 1), (1, 0)]);
        assert!(find_any_cycle(&g2, &edge_set_of(&g2, &[0])).is_none());
    }
}
