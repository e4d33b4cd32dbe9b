//! Negative-cycle elimination solvers over a reorientable graph view.
//!
//! Every edge starts with weight -1; reversing an edge flips its weight to
//! +1 and restores it to -1 when reversed again. Repeatedly finding and
//! reversing negative cycles terminates with the +1 edges forming a maximum
//! balanced subgraph and the -1 edges an acyclic remainder.

use crate::decomp::{Decomposition, SolveStats};
use crate::error::EulerError;
use crate::graph::{DirectedGraph, EdgeSet, VertexId};

pub const SIMPLE_DEFAULT_EDGE_CAP: usize = 50_000;

/// Orientation-aware adjacency. Out-lists reflect the current direction of
/// every edge: a reversal removes the edge from its old source's list and
/// appends it to the new source's list, so scan cursors into unchanged
/// prefixes stay valid.
#[derive(Debug, Clone)]
pub struct ArcView {
    endpoints: Vec<(u32, u32)>,
    flipped: Vec<bool>,
    out: Vec<Vec<u32>>,
}

impl ArcView {
    pub fn new(g: &DirectedGraph) -> Self {
        ArcView::with_reversed(g, None)
    }

    /// Builds the view with the edges of `reversed` already flipped to
    /// weight +1, in the orientation opposite to the host graph's.
    pub fn with_flipped(g: &DirectedGraph, reversed: &EdgeSet) -> Self {
        ArcView::with_reversed(g, Some(reversed))
    }

    fn with_reversed(g: &DirectedGraph, reversed: Option<&EdgeSet>) -> Self {
        let n = g.vertex_count();
        let m = g.edge_count();
        let mut endpoints = Vec::with_capacity(m);
        let mut flipped = vec![false; m];
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); n];
        for e in 0..m {
            let (u, v) = g.edge(e);
            endpoints.push((u.0, v.0));
            let rev = reversed.is_some_and(|s| s.contains(e));
            flipped[e] = rev;
            let owner = if rev { v.index() } else { u.index() };
            out[owner].push(e as u32);
        }
        ArcView {
            endpoints,
            flipped,
            out,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    /// Current (source, target) of the edge.
    #[inline]
    pub fn current(&self, e: usize) -> (u32, u32) {
        let (u, v) = self.endpoints[e];
        if self.flipped[e] {
            (v, u)
        } else {
            (u, v)
        }
    }

    #[inline]
    pub fn weight(&self, e: usize) -> i64 {
        if self.flipped[e] {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn is_flipped(&self, e: usize) -> bool {
        self.flipped[e]
    }

    /// Edges whose current weight is +1, i.e. the reversed ones.
    pub fn flipped_set(&self) -> EdgeSet {
        EdgeSet::from_indices(
            self.edge_count(),
            (0..self.edge_count()).filter(|&e| self.flipped[e]),
        )
    }
}

/// Per-vertex relaxation state: distance estimate, pending-work flag, and
/// the resume cursor into the vertex's current out-list.
#[derive(Debug, Clone)]
pub struct RelaxState {
    pub dst: Vec<i64>,
    pub relax: Vec<bool>,
    pub pos: Vec<u32>,
}

impl RelaxState {
    fn fresh(n: usize) -> Self {
        RelaxState {
            dst: vec![0; n],
            relax: vec![true; n],
            pos: vec![0; n],
        }
    }
}

/// Depth-first negative-cycle search over an [`ArcView`].
///
/// The vertex stack is the DFS path; the edge stack mirrors the path's
/// edges (one shorter, except momentarily when a cycle-closing edge has
/// been pushed). Cursors persist across calls: a vertex resumes scanning
/// where it stopped and restarts from zero only when its distance drops.
#[derive(Debug)]
pub struct CycleSearch {
    pub view: ArcView,
    pub state: RelaxState,
    on_path: Vec<bool>,
    sv: Vec<u32>,
    se: Vec<u32>,
    nv: Option<u32>,
    pub cycles_reversed: u64,
}

impl CycleSearch {
    pub fn new(view: ArcView) -> Self {
        let n = view.vertex_count();
        CycleSearch {
            view,
            state: RelaxState::fresh(n),
            on_path: vec![false; n],
            sv: Vec::new(),
            se: Vec::new(),
            nv: None,
            cycles_reversed: 0,
        }
    }

    /// Starts from preassigned distance estimates instead of zeros.
    pub fn with_initial_dst(view: ArcView, dst: Vec<i64>) -> Self {
        let mut s = CycleSearch::new(view);
        assert_eq!(dst.len(), s.state.dst.len());
        s.state.dst = dst;
        s
    }

    /// Re-entry vertex of the most recently found cycle.
    pub fn nv(&self) -> Option<VertexId> {
        self.nv.map(VertexId)
    }

    /// DFS path at this moment (bottom to top).
    pub fn path_vertices(&self) -> Vec<VertexId> {
        self.sv.iter().map(|&v| VertexId(v)).collect()
    }

    /// Path edges mirroring [`Self::path_vertices`].
    pub fn path_edges(&self) -> Vec<usize> {
        self.se.iter().map(|&e| e as usize).collect()
    }

    /// Relaxes depth-first from `start`. Returns true when a relaxation
    /// closes back onto the DFS path, i.e. a negative cycle was found; the
    /// caller must then invoke [`Self::reverse_found_cycle`]. Returns false
    /// once every vertex reached from `start` is exhausted.
    pub fn dfs_spfa(&mut self, start: VertexId) -> bool {
        debug_assert!(self.sv.is_empty() && self.se.is_empty() && self.nv.is_none());
        let s = start.0;
        self.sv.push(s);
        self.on_path[s as usize] = true;
        loop {
            debug_assert!(self.se.len() + 1 == self.sv.len());
            let v = *self.sv.last().expect("path is non-empty") as usize;
            let cursor = self.state.pos[v] as usize;
            if let Some(&e) = self.view.out[v].get(cursor) {
                self.state.pos[v] += 1;
                let e = e as usize;
                let (src, tgt) = self.view.current(e);
                debug_assert_eq!(src as usize, v);
                let cand = self.state.dst[v] + self.view.weight(e);
                let t = tgt as usize;
                if cand < self.state.dst[t] {
                    debug_assert!(cand <= 0, "distance estimates stay non-positive");
                    self.state.dst[t] = cand;
                    self.state.relax[t] = true;
                    self.state.pos[t] = 0;
                    self.se.push(e as u32);
                    if self.on_path[t] {
                        self.nv = Some(tgt);
                        return true;
                    }
                    self.sv.push(tgt);
                    self.on_path[t] = true;
                }
            } else {
                self.state.relax[v] = false;
                self.sv.pop();
                self.on_path[v] = false;
                if let Some(e) = self.se.pop() {
                    debug_assert_eq!(self.view.current(e as usize).1 as usize, v);
                }
                if self.sv.is_empty() {
                    return false;
                }
            }
        }
    }

    /// Pops the found cycle off the stacks, reverses its edges (flipping
    /// their weights), and clears the remaining path for the next search.
    /// Returns the cycle's edges in forward order starting at the re-entry
    /// vertex, plus the full DFS path as it stood at detection.
    pub fn reverse_found_cycle(&mut self) -> (Vec<usize>, Vec<VertexId>) {
        let nv = self.nv.take().expect("no cycle pending");
        let snapshot: Vec<VertexId> = self.sv.iter().map(|&v| VertexId(v)).collect();
        let mut cycle: Vec<usize> = Vec::new();
        loop {
            let v = *self.sv.last().expect("cycle vertices are on the path");
            self.sv.pop();
            self.on_path[v as usize] = false;
            let e = self.se.pop().expect("edge stack mirrors the path") as usize;
            debug_assert_eq!(self.view.current(e).0, v);
            self.flip_edge(e);
            cycle.push(e);
            if v == nv {
                break;
            }
        }
        for &v in &self.sv {
            self.on_path[v as usize] = false;
        }
        self.sv.clear();
        self.se.clear();
        self.cycles_reversed += 1;
        cycle.reverse();
        (cycle, snapshot)
    }

    /// Flips one edge's orientation, keeping the owner lists and any resume
    /// cursor over the old owner's list consistent.
    fn flip_edge(&mut self, e: usize) {
        let (src, tgt) = self.view.current(e);
        let list = &mut self.view.out[src as usize];
        let idx = list
            .iter()
            .position(|&x| x as usize == e)
            .expect("edge listed under its current source");
        list.remove(idx);
        if self.state.pos[src as usize] as usize > idx {
            self.state.pos[src as usize] -= 1;
        }
        self.view.flipped[e] = !self.view.flipped[e];
        self.view.out[tgt as usize].push(e as u32);
    }

    fn min_dst(&self) -> i64 {
        self.state.dst.iter().copied().min().unwrap_or(0)
    }
}

/// Eliminates all negative cycles by repeated depth-first search.
///
/// The outer loop scans vertices in ascending id order, runs the search
/// from each vertex with pending work, and restarts the scan from the start
/// after every reversed cycle; it terminates when a full scan finds no
/// pending vertex.
pub fn dfseven(g: &DirectedGraph) -> (Decomposition, SolveStats) {
    let n = g.vertex_count();
    let mut search = CycleSearch::new(ArcView::new(g));
    loop {
        let mut found = false;
        for v in 0..n as u32 {
            if search.state.relax[v as usize] && search.dfs_spfa(VertexId(v)) {
                search.reverse_found_cycle();
                found = true;
                break;
            }
        }
        if !found {
            break;
        }
    }
    let m = g.edge_count() as i64;
    let min_dst = search.min_dst();
    assert!(
        min_dst >= -4 * m,
        "termination distance bound violated: {min_dst} < {}",
        -4 * m
    );
    let stats = SolveStats {
        cycles_reversed: search.cycles_reversed,
        min_dst,
    };
    (Decomposition::from_euler(g, search.view.flipped_set()), stats)
}

/// Baseline solver: full Bellman-Ford per iteration, reversing one negative
/// cycle at a time. Quadratic in practice; refuses graphs above `cap` edges.
pub fn simple(g: &DirectedGraph) -> Result<(Decomposition, SolveStats), EulerError> {
    simple_with_cap(g, SIMPLE_DEFAULT_EDGE_CAP)
}

pub fn simple_with_cap(
    g: &DirectedGraph,
    cap: usize,
) -> Result<(Decomposition, SolveStats), EulerError> {
    let m = g.edge_count();
    if m > cap {
        return Err(EulerError::EdgeCapExceeded { m, cap });
    }
    let mut view = ArcView::new(g);
    let mut cycles_reversed = 0u64;
    let min_dst;
    loop {
        match bellman_ford_cycle(&view) {
            Outcome::Converged(min) => {
                min_dst = min;
                break;
            }
            Outcome::Cycle(edges) => {
                for e in edges {
                    view.flipped[e] = !view.flipped[e];
                }
                cycles_reversed += 1;
            }
        }
    }
    let stats = SolveStats {
        cycles_reversed,
        min_dst,
    };
    Ok((
        Decomposition::from_euler(g, view.flipped_set()),
        stats,
    ))
}

enum Outcome {
    /// No negative cycle; carries the smallest converged distance.
    Converged(i64),
    Cycle(Vec<usize>),
}

/// One full Bellman-Ford run from an implicit super-source (all distances
/// zero). Edges are relaxed in index order each round, which makes the
/// predecessor structure and the extracted cycle deterministic.
fn bellman_ford_cycle(view: &ArcView) -> Outcome {
    let n = view.vertex_count();
    let m = view.edge_count();
    let mut dist = vec![0i64; n];
    let mut pred: Vec<i64> = vec![-1; n];
    let mut rounds_with_extra = 0usize;
    let mut converged = false;
    for _ in 0..n {
        let mut changed = false;
        for e in 0..m {
            let (s, t) = view.current(e);
            let cand = dist[s as usize] + view.weight(e);
            if cand < dist[t as usize] {
                dist[t as usize] = cand;
                pred[t as usize] = e as i64;
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }
    loop {
        if converged {
            return Outcome::Converged(dist.iter().copied().min().unwrap_or(0));
        }
        // Find the first edge still open for relaxation; its target has just
        // been (re)attached to the predecessor structure.
        let mut start = None;
        for e in 0..m {
            let (s, t) = view.current(e);
            let cand = dist[s as usize] + view.weight(e);
            if cand < dist[t as usize] {
                dist[t as usize] = cand;
                pred[t as usize] = e as i64;
                start = Some(t as usize);
                break;
            }
        }
        let Some(start) = start else {
            converged = true;
            continue;
        };
        if let Some(cycle) = predecessor_cycle(view, &pred, start) {
            return Outcome::Cycle(cycle);
        }
        // The predecessor chain dead-ended before closing; run another
        // relaxation round so the cycle's influence propagates further.
        rounds_with_extra += 1;
        assert!(
            rounds_with_extra <= n + 1,
            "predecessor walk failed to close a negative cycle"
        );
        for e in 0..m {
            let (s, t) = view.current(e);
            let cand = dist[s as usize] + view.weight(e);
            if cand < dist[t as usize] {
                dist[t as usize] = cand;
                pred[t as usize] = e as i64;
            }
        }
    }
}

/// Walks predecessors from `start` until a vertex repeats, yielding the
/// cycle in forward order, or `None` if the chain dead-ends first.
fn predecessor_cycle(view: &ArcView, pred: &[i64], start: usize) -> Option<Vec<usize>> {
    let n = pred.len();
    let mut seen_at: Vec<i64> = vec![-1; n];
    let mut chain: Vec<usize> = Vec::new();
    let mut cur = start;
    seen_at[cur] = 0;
    loop {
        let pe = pred[cur];
        if pe < 0 {
            return None;
        }
        let e = pe as usize;
        chain.push(e);
        cur = view.current(e).0 as usize;
        if seen_at[cur] >= 0 {
            let keep = chain.len() - seen_at[cur] as usize;
            let _ = keep;
            // Edges pushed after `cur` was first seen form the cycle; the
            // walk ran backwards, so reverse for forward order.
            let from = seen_at[cur] as usize;
            let mut cycle: Vec<usize> = chain.split_off(from);
            cycle.reverse();
            debug_assert!(
                cycle.iter().map(|&e| view.weight(e)).sum::<i64>() < 0,
                "extracted cycle must be negative"
            );
            return Some(cycle);
        }
        seen_at[cur] = chain.len() as i64;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_max_euler;

    /// Five-vertex probe: one triangle reachable from a source with a
    /// pendant edge. Ids in first-appearance order of the edge list.
    fn probe_fixture() -> DirectedGraph {
        // v6=0, v3=1, v1=2, v2=3, v8=4
        DirectedGraph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 1), (0, 4)])
    }

    #[test]
    fn dfs_spfa_traces_first_cycle() {
        let g = probe_fixture();
        let mut search = CycleSearch::new(ArcView::new(&g));
        assert!(search.dfs_spfa(VertexId(0)));
        assert_eq!(search.state.dst, vec![0, -4, -2, -3, 0]);
        assert_eq!(search.nv(), Some(VertexId(1)));
        assert_eq!(search.state.pos[0], 1);
        assert_eq!(
            search.path_vertices(),
            vec![VertexId(0), VertexId(1), VertexId(2), VertexId(3)]
        );
        assert_eq!(search.path_edges(), vec![0, 1, 2, 3]);

        let (cycle, snapshot) = search.reverse_found_cycle();
        assert_eq!(cycle, vec![1, 2, 3]);
        assert_eq!(snapshot.len(), 4);

        // Second pass resumes v=0 from its cursor and reaches the pendant.
        assert!(!search.dfs_spfa(VertexId(0)));
        assert_eq!(search.state.dst[4], -1);
        assert!(!search.state.relax[0]);
        assert!(!search.state.relax[4]);
        // The reversed triangle relaxes nothing further.
        for v in [1, 2, 3] {
            assert!(search.state.relax[v]);
            assert!(!search.dfs_spfa(VertexId(v as u32)));
        }
        let euler = search.view.flipped_set();
        assert_eq!(euler.iter().collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn dfseven_solves_probe() {
        let g = probe_fixture();
        let (d, stats) = dfseven(&g);
        assert_eq!(d.euler.iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(stats.cycles_reversed, 1);
        d.check(&g).unwrap();
    }

    #[test]
    fn simple_solves_probe() {
        let g = probe_fixture();
        let (d, stats) = simple(&g).unwrap();
        assert_eq!(d.euler.iter().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(stats.cycles_reversed, 1);
        d.check(&g).unwrap();
    }

    #[test]
    fn simple_refuses_above_cap() {
        let g = DirectedGraph::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]);
        let err = simple_with_cap(&g, 2).unwrap_err();
        match err {
            EulerError::EdgeCapExceeded { m, cap } => {
                assert_eq!((m, cap), (3, 2));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn eulerian_input_is_fully_kept() {
        // Two triangles sharing vertex 0.
        let g = DirectedGraph::from_pairs(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]);
        let (d, stats) = dfseven(&g);
        assert_eq!(d.euler.len(), 6);
        // Balanced input: every distance stays within twice the edge count.
        assert!(stats.min_dst >= -2 * g.edge_count() as i64);
        let (ds, _) = simple(&g).unwrap();
        assert_eq!(ds.euler.len(), 6);
    }

    #[test]
    fn both_solvers_match_oracle_on_overlapping_cycles() {
        // Two triangles sharing an edge: only one can be kept whole.
        let g = DirectedGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)]);
        let exact = brute_force_max_euler(&g).unwrap();
        let (dd, _) = dfseven(&g);
        let (ds, _) = simple(&g).unwrap();
        assert_eq!(dd.euler.len(), exact.best_size);
        assert_eq!(ds.euler.len(), exact.best_size);
        dd.check(&g).unwrap();
    }
}
