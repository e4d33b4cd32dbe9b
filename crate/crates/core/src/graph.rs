//! Directed graph storage with dense vertex ids and index-addressed edges.
//!
//! Edges are identified by their index in the construction order, and every
//! derived structure (adjacency, edge subsets, SCC membership) refers back to
//! those indices. Adjacency lists keep first-appearance order, which the
//! solvers rely on for deterministic tie-breaking.

use std::collections::HashSet;
use std::fmt;

use crate::error::EulerError;

/// Dense vertex identifier, assigned 0..n.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Membership bitmap over a host graph's edge indices.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeSet {
    bits: Vec<u64>,
    universe: usize,
    len: usize,
}

impl EdgeSet {
    pub fn empty(universe: usize) -> Self {
        EdgeSet {
            bits: vec![0; universe.div_ceil(64)],
            universe,
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = EdgeSet::empty(universe);
        for e in 0..universe {
            s.insert(e);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = EdgeSet::empty(universe);
        for e in indices {
            s.insert(e);
        }
        s
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        debug_assert!(e < self.universe);
        self.bits[e / 64] >> (e % 64) & 1 == 1
    }

    /// Returns true if the edge was newly inserted.
    pub fn insert(&mut self, e: usize) -> bool {
        assert!(e < self.universe, "edge index {e} outside universe");
        let word = &mut self.bits[e / 64];
        let mask = 1u64 << (e % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.len += 1;
            true
        } else {
            false
        }
    }

    /// Returns true if the edge was present.
    pub fn remove(&mut self, e: usize) -> bool {
        assert!(e < self.universe, "edge index {e} outside universe");
        let word = &mut self.bits[e / 64];
        let mask = 1u64 << (e % 64);
        if *word & mask != 0 {
            *word &= !mask;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    /// Ascending iteration over member edge indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rem = bits;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    pub fn complement(&self) -> EdgeSet {
        let mut out = EdgeSet::empty(self.universe);
        for e in 0..self.universe {
            if !self.contains(e) {
                out.insert(e);
            }
        }
        out
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple directed graph: no self-loops, no duplicate edges.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    edges: Vec<(VertexId, VertexId)>,
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
}

impl DirectedGraph {
    /// Builds a graph from an edge list. Edge indices follow the list order
    /// and adjacency lists preserve it. Self-loops, duplicates, and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: Vec<(VertexId, VertexId)>) -> Result<Self, EulerError> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u.index() >= n || v.index() >= n {
                return Err(EulerError::InvalidInput(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(EulerError::InvalidInput(format!("self-loop at {u}")));
            }
            if !seen.insert((u, v)) {
                return Err(EulerError::InvalidInput(format!("duplicate edge ({u}, {v})")));
            }
            out_adj[u.index()].push(i as u32);
            in_adj[v.index()].push(i as u32);
        }
        Ok(DirectedGraph {
            edges,
            out_adj,
            in_adj,
        })
    }

    /// Test convenience: build from raw id pairs, panicking on invalid input.
    pub fn from_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let edges = pairs
            .iter()
            .map(|&(u, v)| (VertexId(u), VertexId(v)))
            .collect();
        DirectedGraph::new(n, edges).expect("valid edge list")
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count() as u32).map(VertexId)
    }

    #[inline]
    pub fn edge(&self, e: usize) -> (VertexId, VertexId) {
        self.edges[e]
    }

    #[inline]
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Outgoing edge indices of `u` in first-appearance order.
    #[inline]
    pub fn out_edges(&self, u: VertexId) -> &[u32] {
        &self.out_adj[u.index()]
    }

    /// Incoming edge indices of `u` in first-appearance order.
    #[inline]
    pub fn in_edges(&self, u: VertexId) -> &[u32] {
        &self.in_adj[u.index()]
    }

    #[inline]
    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out_adj[u.index()].len()
    }

    #[inline]
    pub fn in_degree(&self, u: VertexId) -> usize {
        self.in_adj[u.index()].len()
    }

    /// Graph with every edge (u, v) replaced by (v, u), preserving indices.
    pub fn transpose(&self) -> DirectedGraph {
        let edges = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        DirectedGraph::new(self.vertex_count(), edges).expect("transpose preserves validity")
    }

    /// True when every vertex has equal in- and out-degree within `s`.
    pub fn is_eulerian(&self, s: &EdgeSet) -> bool {
        assert_eq!(s.universe(), self.edge_count(), "edge set universe mismatch");
        let mut balance = vec![0i64; self.vertex_count()];
        for e in s.iter() {
            let (u, v) = self.edges[e];
            balance[u.index()] += 1;
            balance[v.index()] -= 1;
        }
        balance.iter().all(|&b| b == 0)
    }

    /// Per-vertex out-degree minus in-degree within `s`.
    pub fn degree_balance(&self, s: &EdgeSet) -> Vec<i64> {
        let mut balance = vec![0i64; self.vertex_count()];
        for e in s.iter() {
            let (u, v) = self.edges[e];
            balance[u.index()] += 1;
            balance[v.index()] -= 1;
        }
        balance
    }
}
