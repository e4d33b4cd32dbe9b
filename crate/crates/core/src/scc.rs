//! Strongly connected components via iterative Tarjan.
//!
//! Recursion is avoided deliberately: the solvers are run on graphs whose
//! DFS depth can reach hundreds of thousands of frames.

use crate::graph::{DirectedGraph, EdgeSet, VertexId};

const UNVISITED: u32 = u32::MAX;

/// Partition of the vertex set into strongly connected components.
///
/// Components are numbered in ascending order of their smallest member
/// vertex id, and member lists are sorted ascending, so the numbering is
/// independent of traversal order.
#[derive(Debug, Clone)]
pub struct SccPartition {
    component_id: Vec<u32>,
    components: Vec<Vec<VertexId>>,
    internal_edges: Vec<EdgeSet>,
    cross_edges: EdgeSet,
}

impl SccPartition {
    #[inline]
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    #[inline]
    pub fn component_of(&self, u: VertexId) -> u32 {
        self.component_id[u.index()]
    }

    #[inline]
    pub fn members(&self, c: u32) -> &[VertexId] {
        &self.components[c as usize]
    }

    /// Internal edge set of component `c` over host edge indices.
    #[inline]
    pub fn internal_edges(&self, c: u32) -> &EdgeSet {
        &self.internal_edges[c as usize]
    }

    /// Edges whose endpoints lie in different components.
    #[inline]
    pub fn cross_edges(&self) -> &EdgeSet {
        &self.cross_edges
    }
}

pub fn scc_decompose(g: &DirectedGraph) -> SccPartition {
    let n = g.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut frames: Vec<(u32, u32)> = Vec::new();
    let mut raw_id = vec![UNVISITED; n];
    let mut counter = 0u32;
    let mut raw_components: Vec<Vec<u32>> = Vec::new();

    for root in 0..n as u32 {
        if index[root as usize] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut cursor)) = frames.last_mut() {
            let vi = v as usize;
            if *cursor == 0 {
                index[vi] = counter;
                low[vi] = counter;
                counter += 1;
                stack.push(v);
                on_stack[vi] = true;
            }
            if let Some(&e) = g.out_edges(VertexId(v)).get(*cursor as usize) {
                *cursor += 1;
                let w = g.edge(e as usize).1 .0;
                if index[w as usize] == UNVISITED {
                    frames.push((w, 0));
                } else if on_stack[w as usize] {
                    low[vi] = low[vi].min(index[w as usize]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    let pi = parent as usize;
                    low[pi] = low[pi].min(low[vi]);
                }
                if low[vi] == index[vi] {
                    let c = raw_components.len() as u32;
                    let mut members = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        raw_id[w as usize] = c;
                        members.push(w);
                        if w == v {
                            break;
                        }
                    }
                    raw_components.push(members);
                }
            }
        }
    }

    // Renumber by smallest member id.
    let mut order: Vec<u32> = (0..raw_components.len() as u32).collect();
    order.sort_by_key(|&c| raw_components[c as usize].iter().min().copied());
    let mut renumber = vec![0u32; raw_components.len()];
    for (new_id, &old_id) in order.iter().enumerate() {
        renumber[old_id as usize] = new_id as u32;
    }

    let mut component_id = vec![0u32; n];
    let mut components = vec![Vec::new(); raw_components.len()];
    for v in 0..n {
        let c = renumber[raw_id[v] as usize];
        component_id[v] = c;
        components[c as usize].push(VertexId(v as u32));
    }

    let m = g.edge_count();
    let mut internal_edges = vec![EdgeSet::empty(m); raw_components.len()];
    let mut cross_edges = EdgeSet::empty(m);
    for e in 0..m {
        let (u, v) = g.edge(e);
        let cu = component_id[u.index()];
        if cu == component_id[v.index()] {
            internal_edges[cu as usize].insert(e);
        } else {
            cross_edges.insert(e);
        }
    }

    SccPartition {
        component_id,
        components,
        internal_edges,
        cross_edges,
    }
}

/// A single component re-indexed as a standalone graph plus the mapping back
/// to host vertex and edge indices.
#[derive(Debug, Clone)]
pub struct ComponentSubgraph {
    pub graph: DirectedGraph,
    pub host_vertices: Vec<VertexId>,
    pub host_edges: Vec<u32>,
}

/// Extracts component `c` with local vertex ids in ascending host order and
/// local edges in ascending host edge order.
pub fn component_subgraph(g: &DirectedGraph, part: &SccPartition, c: u32) -> ComponentSubgraph {
    let members = part.members(c);
    let mut local_of = vec![u32::MAX; g.vertex_count()];
    for (i, &v) in members.iter().enumerate() {
        local_of[v.index()] = i as u32;
    }
    let mut host_edges = Vec::with_capacity(part.internal_edges(c).len());
    let mut edges = Vec::with_capacity(host_edges.capacity());
    for e in part.internal_edges(c).iter() {
        let (u, v) = g.edge(e);
        host_edges.push(e as u32);
        edges.push((VertexId(local_of[u.index()]), VertexId(local_of[v.index()])));
    }
    let graph = DirectedGraph::new(members.len(), edges).expect("component edges stay valid");
    ComponentSubgraph {
        graph,
        host_vertices: members.to_vec(),
        host_edges,
    }
}
