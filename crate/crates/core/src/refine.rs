//! Refinement of a greedy solution to a maximum balanced subgraph, and the
//! combined per-component pipeline.
//!
//! Refinement reuses the depth-first negative-cycle search, but starts
//! from the greedy orientation (balanced edges reversed at weight +1) and
//! from distance estimates that are already settled for the acyclic
//! remainder, so only the gap between greedy and optimal is paid for.

use std::collections::VecDeque;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rayon::prelude::*;

use crate::baseline::{ArcView, CycleSearch};
use crate::decomp::{Decomposition, SolveStats};
use crate::error::{ComponentDump, EulerError};
use crate::graph::{DirectedGraph, EdgeSet, VertexId};
use crate::greedy::{greedy, move_cycles, GreedyVariant};
use crate::scc::{component_subgraph, scc_decompose};

/// Settled starting distances for refinement: the negation of the longest
/// path ending at each vertex inside the left-over (non-balanced) edges.
/// With these, no left-over edge can relax anything; only the reversed
/// balanced edges can, and each such relaxation chain witnesses a real
/// improvement cycle.
///
/// Fails if the left-over edges contain a cycle; run
/// [`move_cycles`] first.
pub fn init_dst(g: &DirectedGraph, approx: &EdgeSet) -> Result<Vec<i64>, EulerError> {
    let n = g.vertex_count();
    let residual = approx.complement();
    let mut indeg = vec![0u32; n];
    for e in residual.iter() {
        indeg[g.edge(e).1.index()] += 1;
    }
    let mut order: Vec<u32> = (0..n as u32)
        .filter(|&v| indeg[v as usize] == 0)
        .collect();
    let mut dst = vec![0i64; n];
    let mut head = 0;
    while head < order.len() {
        let u = VertexId(order[head]);
        head += 1;
        for &e in g.out_edges(u) {
            if !residual.contains(e as usize) {
                continue;
            }
            let v = g.edge(e as usize).1;
            dst[v.index()] = dst[v.index()].min(dst[u.index()] - 1);
            indeg[v.index()] -= 1;
            if indeg[v.index()] == 0 {
                order.push(v.0);
            }
        }
    }
    if order.len() != n {
        return Err(EulerError::InvalidInput(
            "left-over edges contain a cycle; move cycles back first".into(),
        ));
    }
    debug_assert!(residual.iter().all(|e| {
        let (u, v) = g.edge(e);
        dst[u.index()] - 1 >= dst[v.index()]
    }));
    Ok(dst)
}

/// Queue-driven elimination of the improvement cycles a greedy solution
/// left behind. Wraps the depth-first cycle search (which carries the
/// distance estimates, relax flags and the count of cycles found) together
/// with the FIFO queue of candidate start vertices.
pub struct RefineState {
    pub search: CycleSearch,
    /// Candidate starts, seeded with every vertex in ascending order. A
    /// vertex leaves the front only when a search from it finds no cycle;
    /// at a detection, every vertex of the abandoned search path re-enters
    /// at the back, so no relaxable start is ever lost.
    pub queue: VecDeque<u32>,
}

impl RefineState {
    pub fn new(g: &DirectedGraph, approx: &EdgeSet, dst: Vec<i64>) -> Self {
        let view = ArcView::with_flipped(g, approx);
        RefineState {
            search: CycleSearch::with_initial_dst(view, dst),
            queue: (0..g.vertex_count() as u32).collect(),
        }
    }

    /// Drains the queue; afterwards no negative cycle remains.
    pub fn run(&mut self) {
        while let Some(&v) = self.queue.front() {
            if !self.search.state.relax[v as usize] {
                self.queue.pop_front();
                continue;
            }
            if self.search.dfs_spfa(VertexId(v)) {
                let (_, snapshot) = self.search.reverse_found_cycle();
                self.queue.extend(snapshot.iter().map(|w| w.0));
            } else {
                self.queue.pop_front();
            }
        }
    }
}

/// Eliminates every remaining improvement cycle of a balanced subgraph,
/// yielding a maximum one. `approx` must be balanced and its complement
/// acyclic.
pub fn refine(
    g: &DirectedGraph,
    approx: &EdgeSet,
) -> Result<(Decomposition, SolveStats), EulerError> {
    if !g.is_eulerian(approx) {
        return Err(EulerError::InvalidInput(
            "refinement input subgraph is not balanced".into(),
        ));
    }
    let dst = init_dst(g, approx)?;
    let mut state = RefineState::new(g, approx, dst);
    state.run();
    let min_dst = state.search.state.dst.iter().copied().min().unwrap_or(0);
    let stats = SolveStats {
        cycles_reversed: state.search.cycles_reversed,
        min_dst,
    };
    let euler = state.search.view.flipped_set();
    Ok((Decomposition::from_euler(g, euler), stats))
}

/// Per-component figures from one pipeline run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ComponentMetrics {
    pub component_id: u32,
    pub vertices: usize,
    pub edges: usize,
    /// Balanced edges right after the greedy phase.
    pub greedy_size: usize,
    /// Left-over cycles moved back before refinement.
    pub moved_cycles: u64,
    /// Improvement cycles the refinement still had to reverse.
    pub refine_iterations: u64,
    pub l_max: u32,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub decomposition: Decomposition,
    /// Balanced subgraph after greedy and cycle moves, before refinement;
    /// the input for gap analysis.
    pub greedy_approx: EdgeSet,
    pub l_max: u32,
    /// Total refinement cycles across components.
    pub cycles_reversed: u64,
    /// Components that contain at least one edge, in id order.
    pub components: Vec<ComponentMetrics>,
}

/// Greedy, cycle moves, then refinement, independently per strongly
/// connected component (cycles never cross components). Components run in
/// parallel; results are merged in component order, so the outcome does
/// not depend on the thread count.
pub fn greedy_and_refine(
    g: &DirectedGraph,
    variant: GreedyVariant,
) -> Result<PipelineResult, EulerError> {
    let part = scc_decompose(g);
    let work: Vec<u32> = (0..part.component_count() as u32)
        .filter(|&c| !part.internal_edges(c).is_empty())
        .collect();
    let per_component: Result<Vec<_>, EulerError> = work
        .par_iter()
        .map(|&c| {
            let sub = component_subgraph(g, &part, c);
            catch_unwind(AssertUnwindSafe(|| solve_component(&sub.graph, variant)))
                .unwrap_or_else(|_| {
                    Err(EulerError::Invariant {
                        message: format!("solver panicked on component {c}"),
                        dump: Some(ComponentDump {
                            component_id: c,
                            edges: sub
                                .graph
                                .edges()
                                .iter()
                                .map(|&(u, v)| (sub.host_vertices[u.index()].0, sub.host_vertices[v.index()].0))
                                .collect(),
                        }),
                    })
                })
                .map(|r| (c, sub, r))
        })
        .collect();
    let per_component = per_component?;

    let m = g.edge_count();
    let mut euler = EdgeSet::empty(m);
    let mut greedy_approx = EdgeSet::empty(m);
    let mut components = Vec::with_capacity(per_component.len());
    let mut l_max = 0u32;
    let mut cycles_reversed = 0u64;
    for (c, sub, solved) in per_component {
        for e in solved.euler.iter() {
            euler.insert(sub.host_edges[e] as usize);
        }
        for e in solved.approx.iter() {
            greedy_approx.insert(sub.host_edges[e] as usize);
        }
        l_max = l_max.max(solved.l_max);
        cycles_reversed += solved.refine_iterations;
        components.push(ComponentMetrics {
            component_id: c,
            vertices: sub.graph.vertex_count(),
            edges: sub.graph.edge_count(),
            greedy_size: solved.greedy_size,
            moved_cycles: solved.moved_cycles,
            refine_iterations: solved.refine_iterations,
            l_max: solved.l_max,
        });
    }
    let decomposition = Decomposition::from_euler(g, euler);
    decomposition.check(g)?;
    Ok(PipelineResult {
        decomposition,
        greedy_approx,
        l_max,
        cycles_reversed,
        components,
    })
}

struct SolvedComponent {
    euler: EdgeSet,
    approx: EdgeSet,
    greedy_size: usize,
    moved_cycles: u64,
    refine_iterations: u64,
    l_max: u32,
}

fn solve_component(
    sub: &DirectedGraph,
    variant: GreedyVariant,
) -> Result<SolvedComponent, EulerError> {
    let out = greedy(sub, variant)?;
    let greedy_size = out.approx.len();
    let mut approx = out.approx;
    let moved_cycles = move_cycles(sub, &mut approx);
    let (d, stats) = refine(sub, &approx)?;
    Ok(SolvedComponent {
        euler: d.euler,
        approx,
        greedy_size,
        moved_cycles,
        refine_iterations: stats.cycles_reversed,
        l_max: out.l_max,
    })
}
