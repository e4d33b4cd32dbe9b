//! Result type shared by every solver: a split of the edge set into a
//! balanced part and an acyclic remainder.

use crate::error::EulerError;
use crate::graph::{DirectedGraph, EdgeSet, VertexId};

/// Split of a host graph's edges: `euler` is balanced at every vertex
/// (equal in- and out-degree), `dag` is its acyclic complement.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub euler: EdgeSet,
    pub dag: EdgeSet,
}

impl Decomposition {
    /// Builds the decomposition with `dag` as the complement of `euler`.
    pub fn from_euler(g: &DirectedGraph, euler: EdgeSet) -> Self {
        assert_eq!(euler.universe(), g.edge_count());
        let dag = euler.complement();
        Decomposition { euler, dag }
    }

    /// Number of distinct vertices touched by the balanced part.
    pub fn euler_vertex_count(&self, g: &DirectedGraph) -> usize {
        let mut touched = vec![false; g.vertex_count()];
        for e in self.euler.iter() {
            let (u, v) = g.edge(e);
            touched[u.index()] = true;
            touched[v.index()] = true;
        }
        touched.iter().filter(|&&t| t).count()
    }

    /// Validates the structural contract: the two sets partition the edges,
    /// `euler` is balanced, and `dag` is acyclic.
    pub fn check(&self, g: &DirectedGraph) -> Result<(), EulerError> {
        let m = g.edge_count();
        if self.euler.universe() != m || self.dag.universe() != m {
            return Err(EulerError::invariant("edge set universe mismatch"));
        }
        if !self.euler.is_disjoint(&self.dag) || self.euler.len() + self.dag.len() != m {
            return Err(EulerError::invariant("euler and dag must partition the edges"));
        }
        if !g.is_eulerian(&self.euler) {
            return Err(EulerError::invariant("euler part is not balanced"));
        }
        if !dag_is_acyclic(g, &self.dag) {
            return Err(EulerError::invariant("dag part contains a cycle"));
        }
        Ok(())
    }
}

/// Kahn peeling restricted to `s`.
pub fn dag_is_acyclic(g: &DirectedGraph, s: &EdgeSet) -> bool {
    let n = g.vertex_count();
    let mut in_deg = vec![0u32; n];
    for e in s.iter() {
        in_deg[g.edge(e).1.index()] += 1;
    }
    let mut queue: Vec<u32> = (0..n as u32).filter(|&v| in_deg[v as usize] == 0).collect();
    let mut seen = 0usize;
    while let Some(v) = queue.pop() {
        seen += 1;
        for &e in g.out_edges(VertexId(v)) {
            if s.contains(e as usize) {
                let w = g.edge(e as usize).1;
                in_deg[w.index()] -= 1;
                if in_deg[w.index()] == 0 {
                    queue.push(w.0);
                }
            }
        }
    }
    seen == n
}

/// Counters reported by each solver run.
#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct SolveStats {
    /// Negative cycles found and reversed.
    pub cycles_reversed: u64,
    /// Smallest distance estimate observed at termination.
    pub min_dst: i64,
}

/// Independent audit of a finished decomposition: orient every `euler` edge
/// backwards with weight +1 and every `dag` edge forwards with weight -1,
/// then verify by full Bellman-Ford relaxation that no negative cycle
/// remains. A maximal balanced part must pass this.
pub fn audit_no_negative_cycle(g: &DirectedGraph, d: &Decomposition) -> bool {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut arcs: Vec<(u32, u32, i64)> = Vec::with_capacity(m);
    for e in 0..m {
        let (u, v) = g.edge(e);
        if d.euler.contains(e) {
            arcs.push((v.0, u.0, 1));
        } else {
            arcs.push((u.0, v.0, -1));
        }
    }
    let mut dist = vec![0i64; n];
    for _ in 0..n {
        let mut changed = false;
        for &(s, t, w) in &arcs {
            let cand = dist[s as usize] + w;
            if cand < dist[t as usize] {
                dist[t as usize] = cand;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
    arcs.iter()
        .all(|&(s, t, w)| dist[s as usize] + w >= dist[t as usize])
}
