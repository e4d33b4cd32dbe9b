//! Hierarchy ranks from the acyclic part of a decomposition, and the
//! scores built on them.
//!
//! Every vertex gets the minimum non-negative rank such that each acyclic
//! edge (u, v) satisfies rank(u) < rank(v); that minimum is the
//! longest-path level, so ranks are canonical and deterministic.

use serde::Serialize;

use crate::decomp::Decomposition;
use crate::error::EulerError;
use crate::graph::{DirectedGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    rank: Vec<u32>,
}

impl Ranking {
    pub fn from_ranks(rank: Vec<u32>) -> Self {
        Ranking { rank }
    }

    #[inline]
    pub fn rank(&self, v: VertexId) -> u32 {
        self.rank[v.index()]
    }

    pub fn max_rank(&self) -> u32 {
        self.rank.iter().copied().max().unwrap_or(0)
    }

    pub fn vertex_count(&self) -> usize {
        self.rank.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.rank
    }
}

/// Longest-path levels over the acyclic part: rank(v) is the edge count of
/// the longest acyclic-part path ending at v. This is the pointwise
/// minimum among all valid rankings.
pub fn assign_ranks(g: &DirectedGraph, d: &Decomposition) -> Result<Ranking, EulerError> {
    let n = g.vertex_count();
    let mut indeg = vec![0u32; n];
    for e in d.dag.iter() {
        indeg[g.edge(e).1.index()] += 1;
    }
    let mut order: Vec<u32> = (0..n as u32)
        .filter(|&v| indeg[v as usize] == 0)
        .collect();
    let mut rank = vec![0u32; n];
    let mut head = 0;
    while head < order.len() {
        let u = VertexId(order[head]);
        head += 1;
        for &e in g.out_edges(u) {
            if !d.dag.contains(e as usize) {
                continue;
            }
            let v = g.edge(e as usize).1;
            rank[v.index()] = rank[v.index()].max(rank[u.index()] + 1);
            indeg[v.index()] -= 1;
            if indeg[v.index()] == 0 {
                order.push(v.0);
            }
        }
    }
    if order.len() != n {
        return Err(EulerError::invariant(
            "acyclic part of the decomposition contains a cycle",
        ));
    }
    Ok(Ranking { rank })
}

/// Total penalty of edges running down the hierarchy:
/// sum over all edges of max(rank(u) - rank(v) + 1, 0).
///
/// For any ranking this is at least the size of the balanced part, since
/// the ranks around each cycle telescope to zero.
pub fn agony(g: &DirectedGraph, r: &Ranking) -> u64 {
    let mut total = 0u64;
    for &(u, v) in g.edges() {
        let a = r.rank(u) as i64 - r.rank(v) as i64 + 1;
        if a > 0 {
            total += a as u64;
        }
    }
    total
}

#[derive(Debug, Clone, Serialize)]
pub struct RankBin {
    pub rank: u32,
    pub count: usize,
    pub fraction: f64,
    /// Mean in-degree minus out-degree of the bin's vertices in the whole
    /// graph; bottom ranks of a pyramid-shaped hierarchy show this
    /// negative.
    pub mean_in_minus_out: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankHistogram {
    pub bins: Vec<RankBin>,
}

pub fn rank_distribution(g: &DirectedGraph, r: &Ranking) -> RankHistogram {
    let n = g.vertex_count();
    if n == 0 {
        return RankHistogram { bins: Vec::new() };
    }
    let levels = r.max_rank() as usize + 1;
    let mut count = vec![0usize; levels];
    let mut balance = vec![0i64; levels];
    for v in g.vertices() {
        let k = r.rank(v) as usize;
        count[k] += 1;
        balance[k] += g.in_degree(v) as i64 - g.out_degree(v) as i64;
    }
    let bins = (0..levels)
        .map(|k| RankBin {
            rank: k as u32,
            count: count[k],
            fraction: count[k] as f64 / n as f64,
            mean_in_minus_out: if count[k] == 0 {
                0.0
            } else {
                balance[k] as f64 / count[k] as f64
            },
        })
        .collect();
    RankHistogram { bins }
}

/// True when u outranks v and v actually reaches u through the acyclic
/// part, i.e. the hierarchy really places u above v rather than merely in
/// an unrelated region.
pub fn strictly_higher(
    g: &DirectedGraph,
    d: &Decomposition,
    r: &Ranking,
    u: VertexId,
    v: VertexId,
) -> bool {
    r.rank(u) > r.rank(v) && dag_reaches(g, d, v, u)
}

/// All ordered pairs (u, v) with u strictly higher than v, sorted. Meant
/// for small graphs; quadratic in the vertex count.
pub fn strictly_higher_pairs(
    g: &DirectedGraph,
    d: &Decomposition,
    r: &Ranking,
) -> Vec<(u32, u32)> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for v in 0..n as u32 {
        let reach = dag_reachable_from(g, d, VertexId(v));
        for u in 0..n as u32 {
            if reach[u as usize] && r.rank(VertexId(u)) > r.rank(VertexId(v)) {
                out.push((u, v));
            }
        }
    }
    out.sort_unstable();
    out
}

fn dag_reaches(g: &DirectedGraph, d: &Decomposition, from: VertexId, to: VertexId) -> bool {
    dag_reachable_from(g, d, from)[to.index()]
}

fn dag_reachable_from(g: &DirectedGraph, d: &Decomposition, from: VertexId) -> Vec<bool> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![from.0];
    seen[from.index()] = true;
    while let Some(x) = stack.pop() {
        for &e in g.out_edges(VertexId(x)) {
            if !d.dag.contains(e as usize) {
                continue;
            }
            let t = g.edge(e as usize).1;
            if !seen[t.index()] {
                seen[t.index()] = true;
                stack.push(t.0);
            }
        }
    }
    seen
}

/// Vertices from the top of the hierarchy down: rank descending, then
/// in-degree descending, then id ascending. The shared order behind group
/// splits and top-fraction queries.
pub fn hierarchy_order(g: &DirectedGraph, r: &Ranking) -> Vec<VertexId> {
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by(|&a, &b| {
        r.rank(b)
            .cmp(&r.rank(a))
            .then(g.in_degree(b).cmp(&g.in_degree(a)))
            .then(a.0.cmp(&b.0))
    });
    order
}

/// The top `fraction` of the hierarchy (at least one vertex for a positive
/// fraction on a non-empty graph).
pub fn top_fraction(g: &DirectedGraph, r: &Ranking, fraction: f64) -> Vec<VertexId> {
    assert!((0.0..=1.0).contains(&fraction), "fraction outside [0, 1]");
    let k = (fraction * g.vertex_count() as f64).ceil() as usize;
    let mut order = hierarchy_order(g, r);
    order.truncate(k);
    order
}
