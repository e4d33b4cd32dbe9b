//! Greedy imbalance elimination.
//!
//! A vertex's label is its out-degree minus in-degree counted over the
//! edges still held at weight -1. Vertices with positive labels carry
//! surplus, negative labels deficit. The greedy phase repeatedly finds a
//! shortest path from a surplus vertex to a deficit vertex and either
//! deletes its edges or reverses them; both operations shift one unit of
//! surplus off each endpoint and leave interior labels unchanged. Once all
//! labels are zero the remaining weight -1 edges form a balanced subgraph.
//!
//! Paths of length l are enumerated in increasing l. Once no path of
//! length l exists, none of length <= l can reappear later, so l only
//! advances. For each l the search runs inside the layered subgraph of
//! vertices on some shortest surplus-to-deficit path of length exactly l,
//! with persistent per-vertex scan cursors; every layer edge is examined
//! at most once per l.

use std::collections::VecDeque;

use crate::cycle::find_any_cycle;
use crate::error::EulerError;
use crate::graph::{DirectedGraph, EdgeSet};

const INF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreedyVariant {
    /// Delete path edges (loses them for good; cheaper bookkeeping).
    Delete,
    /// Reverse path edges (they may later be reversed back).
    Reverse,
}

impl std::fmt::Display for GreedyVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GreedyVariant::Delete => f.write_str("gr-d"),
            GreedyVariant::Reverse => f.write_str("gr-r"),
        }
    }
}

/// Per-length summary of one greedy run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub l: u32,
    /// Edge count of the layered subgraph built for this length.
    pub layer_edges: usize,
    /// Paths found and applied at this length.
    pub paths: u32,
}

#[derive(Debug, Clone)]
pub struct GreedyOutcome {
    /// Balanced subgraph in the original orientation: the edges never
    /// deleted (delete variant) or held at weight -1 (reverse variant).
    pub approx: EdgeSet,
    /// Largest path length at which a path was applied; 0 when the input
    /// was balanced already.
    pub l_max: u32,
    pub paths_total: u64,
    pub levels: Vec<LevelStats>,
}

/// One applied surplus-to-deficit path: its length and edge ids in walk
/// order (each edge in the orientation it had when walked).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnPath {
    pub l: u32,
    pub edges: Vec<usize>,
}

/// Imbalance snapshot of a graph: per-vertex labels, the two BFS distance
/// fields the path search is layered on, and the total surplus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelState {
    /// Out-degree minus in-degree per vertex; sums to zero.
    pub label: Vec<i64>,
    /// BFS distance from the nearest surplus vertex along edges;
    /// [`UNREACHED`] where there is none.
    pub level: Vec<u32>,
    /// BFS distance to the nearest deficit vertex along edges.
    pub rlevel: Vec<u32>,
    /// Total positive label; zero exactly when the graph is balanced.
    pub surplus: i64,
}

/// Distance marker for vertices no surplus or deficit vertex can reach.
pub const UNREACHED: u32 = INF;

/// Labels and uncapped surplus/deficit distances of `g` as given; the
/// greedy phase recomputes the same data against its working orientation
/// with the distances capped at the current path length.
pub fn compute_labels(g: &DirectedGraph) -> LabelState {
    let view = WorkingView::new(g);
    let cap = g.vertex_count() as u32;
    LabelState {
        level: view.levels(cap),
        rlevel: view.rlevels(cap),
        surplus: view.surplus,
        label: view.label,
    }
}

pub fn greedy(g: &DirectedGraph, variant: GreedyVariant) -> Result<GreedyOutcome, EulerError> {
    run(g, variant, |_, _| {})
}

/// Path-deleting greedy pass over the whole graph.
pub fn greedy_d(g: &DirectedGraph) -> Result<GreedyOutcome, EulerError> {
    greedy(g, GreedyVariant::Delete)
}

/// Path-reversing greedy pass over the whole graph.
pub fn greedy_r(g: &DirectedGraph) -> Result<GreedyOutcome, EulerError> {
    greedy(g, GreedyVariant::Reverse)
}

/// Like [`greedy`] but also returns every applied path, for tracing and
/// tests.
pub fn greedy_traced(
    g: &DirectedGraph,
    variant: GreedyVariant,
) -> Result<(GreedyOutcome, Vec<PnPath>), EulerError> {
    let mut paths = Vec::new();
    let outcome = run(g, variant, |l, edges: &[u32]| {
        paths.push(PnPath {
            l,
            edges: edges.iter().map(|&e| e as usize).collect(),
        });
    })?;
    Ok((outcome, paths))
}

/// Working copy of a graph during the greedy phase: per-edge deleted and
/// reversed bits plus labels and total surplus kept in step with them.
pub struct WorkingView<'g> {
    g: &'g DirectedGraph,
    flipped: Vec<bool>,
    removed: Vec<bool>,
    label: Vec<i64>,
    surplus: i64,
}

impl<'g> WorkingView<'g> {
    pub fn new(g: &'g DirectedGraph) -> Self {
        let label = g.degree_balance(&EdgeSet::full(g.edge_count()));
        let surplus = label.iter().filter(|&&x| x > 0).sum();
        WorkingView {
            g,
            flipped: vec![false; g.edge_count()],
            removed: vec![false; g.edge_count()],
            label,
            surplus,
        }
    }

    /// Current out-degree minus in-degree per vertex.
    pub fn labels(&self) -> &[i64] {
        &self.label
    }

    /// Total remaining surplus; zero once balanced.
    pub fn surplus(&self) -> i64 {
        self.surplus
    }

    /// Whether edge `e` has been deleted.
    pub fn is_removed(&self, e: usize) -> bool {
        self.removed[e]
    }

    /// Endpoints of edge `e` in its current orientation.
    #[inline]
    pub fn current(&self, e: usize) -> (u32, u32) {
        let (u, v) = self.g.edge(e);
        if self.flipped[e] {
            (v.0, u.0)
        } else {
            (u.0, v.0)
        }
    }

    /// Edges still held in their original orientation. Once the surplus is
    /// zero these form a balanced subgraph.
    pub fn kept_set(&self) -> EdgeSet {
        let m = self.g.edge_count();
        EdgeSet::from_indices(m, (0..m).filter(|&e| !self.removed[e] && !self.flipped[e]))
    }

    /// BFS distance from the surplus vertices along current edges, cut off
    /// beyond `cap`.
    fn levels(&self, cap: u32) -> Vec<u32> {
        self.bfs(cap, true)
    }

    /// BFS distance to the deficit vertices against current edges.
    fn rlevels(&self, cap: u32) -> Vec<u32> {
        self.bfs(cap, false)
    }

    fn bfs(&self, cap: u32, forward: bool) -> Vec<u32> {
        let n = self.g.vertex_count();
        let mut dist = vec![INF; n];
        let mut q = VecDeque::new();
        for v in 0..n {
            let seed = if forward {
                self.label[v] > 0
            } else {
                self.label[v] < 0
            };
            if seed {
                dist[v] = 0;
                q.push_back(v as u32);
            }
        }
        while let Some(x) = q.pop_front() {
            let d = dist[x as usize];
            if d == cap {
                continue;
            }
            let mut visit = |e: usize, straight: bool| {
                if self.removed[e] {
                    return;
                }
                // A flipped edge currently runs opposite to its stored
                // endpoints, so it is followed from the stored list of the
                // other direction.
                if self.flipped[e] == straight {
                    return;
                }
                let (a, b) = self.current(e);
                let t = if forward { b } else { a };
                debug_assert_eq!(if forward { a } else { b }, x);
                if dist[t as usize] == INF {
                    dist[t as usize] = d + 1;
                    q.push_back(t);
                }
            };
            if forward {
                for &e in self.g.out_edges(crate::graph::VertexId(x)) {
                    visit(e as usize, true);
                }
                for &e in self.g.in_edges(crate::graph::VertexId(x)) {
                    visit(e as usize, false);
                }
            } else {
                for &e in self.g.in_edges(crate::graph::VertexId(x)) {
                    visit(e as usize, true);
                }
                for &e in self.g.out_edges(crate::graph::VertexId(x)) {
                    visit(e as usize, false);
                }
            }
        }
        dist
    }

    fn apply(&mut self, path: &[u32], variant: GreedyVariant) {
        for &e in path {
            let e = e as usize;
            let (a, b) = self.current(e);
            self.label[a as usize] -= 1;
            self.label[b as usize] += 1;
            match variant {
                GreedyVariant::Delete => self.removed[e] = true,
                GreedyVariant::Reverse => self.flipped[e] = !self.flipped[e],
            }
        }
        self.surplus -= 1;
    }
}

/// The layered subgraph for one path length: the vertices lying on some
/// shortest surplus-to-deficit path of length exactly `l`, and the edges
/// stepping one level up inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredSubgraph {
    pub l: u32,
    /// Vertices whose surplus and deficit distances sum to exactly `l`.
    pub vertices: Vec<u32>,
    /// Edge ids of the underlying graph, in ascending order; each is taken
    /// in its current orientation.
    pub edges: Vec<usize>,
}

/// Restricts the view to its length-`l` layer. As long as no shorter
/// surplus-to-deficit path exists, every such path of length `l` lies
/// entirely inside the layer, so the path search never has to leave it.
pub fn l_subgraph(view: &WorkingView<'_>, l: u32) -> LayeredSubgraph {
    let n = view.g.vertex_count();
    let level = view.levels(l);
    let rlevel = view.rlevels(l);
    let in_layer =
        |v: usize| level[v] != INF && rlevel[v] != INF && level[v] + rlevel[v] == l;
    let vertices: Vec<u32> = (0..n as u32).filter(|&v| in_layer(v as usize)).collect();
    let mut edges = Vec::new();
    for e in 0..view.g.edge_count() {
        if view.removed[e] {
            continue;
        }
        let (a, b) = view.current(e);
        let (a, b) = (a as usize, b as usize);
        if in_layer(a) && in_layer(b) && level[a] + 1 == level[b] {
            edges.push(e);
        }
    }
    LayeredSubgraph { l, vertices, edges }
}

/// Deletes every remaining surplus-to-deficit path of length exactly `l`
/// and returns how many were applied. Callers must have exhausted all
/// shorter lengths first.
pub fn length_l_delete(view: &mut WorkingView<'_>, l: u32) -> u32 {
    length_l(view, l, GreedyVariant::Delete, &mut |_, _| {}).0
}

/// Reverses every remaining surplus-to-deficit path of length exactly `l`
/// and returns how many were applied.
pub fn length_l_reverse(view: &mut WorkingView<'_>, l: u32) -> u32 {
    length_l(view, l, GreedyVariant::Reverse, &mut |_, _| {}).0
}

/// One length-`l` pass: walks the layered subgraph depth-first from each
/// surplus vertex, applying every complete path it finds. Returns the paths
/// applied and the layer's edge count.
fn length_l(
    view: &mut WorkingView<'_>,
    l: u32,
    variant: GreedyVariant,
    observer: &mut impl FnMut(u32, &[u32]),
) -> (u32, usize) {
    let n = view.g.vertex_count();
    let layer = l_subgraph(view, l);
    // Layer adjacency in ascending edge order, walked with persistent
    // per-vertex cursors so each layer edge is pulled at most once.
    let mut layer_out: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &e in &layer.edges {
        let (a, _) = view.current(e);
        layer_out[a as usize].push(e as u32);
    }
    let starts: Vec<u32> = layer
        .vertices
        .iter()
        .copied()
        .filter(|&v| view.label[v as usize] > 0)
        .collect();
    let mut cursor = vec![0u32; n];
    let mut paths_this = 0u32;
    let mut sv: Vec<u32> = Vec::new();
    let mut se: Vec<u32> = Vec::new();
    for &u in &starts {
        'per_start: while view.label[u as usize] > 0 {
            sv.clear();
            se.clear();
            sv.push(u);
            let found = loop {
                let x = *sv.last().expect("walk stack is non-empty") as usize;
                // Walk depth equals the surplus distance, so a full-length
                // walk stands on the deficit frontier.
                if se.len() == l as usize {
                    if view.label[x] < 0 {
                        break true;
                    }
                    // The deficit here was already absorbed; retreat.
                    sv.pop();
                    se.pop();
                    if sv.is_empty() {
                        break false;
                    }
                    continue;
                }
                let c = cursor[x] as usize;
                if let Some(&e) = layer_out[x].get(c) {
                    cursor[x] += 1;
                    let (a, b) = view.current(e as usize);
                    debug_assert_eq!(a as usize, x);
                    sv.push(b);
                    se.push(e);
                } else {
                    sv.pop();
                    se.pop();
                    if sv.is_empty() {
                        break false;
                    }
                }
            };
            if !found {
                break 'per_start;
            }
            debug_assert_eq!(se.len(), l as usize);
            view.apply(&se, variant);
            observer(l, &se);
            paths_this += 1;
        }
    }
    debug_assert!(
        cursor.iter().map(|&c| c as usize).sum::<usize>() <= layer.edges.len(),
        "a layer edge was pulled twice in one pass"
    );
    (paths_this, layer.edges.len())
}

fn run(
    g: &DirectedGraph,
    variant: GreedyVariant,
    mut observer: impl FnMut(u32, &[u32]),
) -> Result<GreedyOutcome, EulerError> {
    let n = g.vertex_count();
    let mut view = WorkingView::new(g);
    let mut l = 0u32;
    let mut l_max = 0u32;
    let mut paths_total = 0u64;
    let mut levels = Vec::new();
    while view.surplus > 0 {
        l += 1;
        if l > n as u32 {
            return Err(EulerError::invariant(format!(
                "imbalance remains but no surplus-to-deficit path of length <= {n} exists"
            )));
        }
        let (paths_this, layer_edges) = length_l(&mut view, l, variant, &mut observer);
        if paths_this > 0 {
            l_max = l;
        }
        paths_total += u64::from(paths_this);
        levels.push(LevelStats {
            l,
            layer_edges,
            paths: paths_this,
        });
    }
    debug_assert!(view.label.iter().all(|&x| x == 0));
    let approx = view.kept_set();
    debug_assert!(g.is_eulerian(&approx));
    Ok(GreedyOutcome {
        approx,
        l_max,
        paths_total,
        levels,
    })
}

/// Moves whole cycles of left-over edges back into the balanced subgraph
/// until the remainder is acyclic. A cycle is balanced on its own, so each
/// move keeps `approx` balanced while growing it. Returns the number of
/// cycles moved.
pub fn move_cycles(g: &DirectedGraph, approx: &mut EdgeSet) -> u64 {
    let mut moved = 0u64;
    loop {
        let residual = approx.complement();
        match find_any_cycle(g, &residual) {
            Some(cycle) => {
                for e in cycle {
                    approx.insert(e);
                }
                moved += 1;
            }
            None => return moved,
        }
    }
}
