//! Gap accounting between a greedy and an exact balanced subgraph, plus
//! the downstream applications: social mobility between two snapshots and
//! edge-direction recovery.
//!
//! The audit graph overlays the two subgraphs' disagreements: edges only
//! the exact solution keeps enter reversed with sign +1, edges only the
//! greedy solution keeps enter as-is with sign -1. Edges in both or in
//! neither cancel out and are dropped. The overlay is balanced, so it
//! peels into cycles; each cycle mixes signs, carries non-negative weight,
//! and the weights sum exactly to the size gap. The sign runs around each
//! cycle drive the closed-form bound.

use std::collections::HashSet;

use serde::Serialize;

use crate::cycle::peel_edge_cycles;
use crate::error::EulerError;
use crate::graph::{DirectedGraph, EdgeSet, VertexId};
use crate::hierarchy::{hierarchy_order, Ranking};

/// Edge-signed multigraph; parallel and anti-parallel duplicates allowed.
#[derive(Debug, Clone)]
pub struct SignedMultigraph {
    pub n: usize,
    /// (source, target, sign) with sign in {-1, +1}.
    pub edges: Vec<(u32, u32, i8)>,
}

pub fn build_gcal(
    g: &DirectedGraph,
    approx: &EdgeSet,
    exact: &EdgeSet,
) -> Result<SignedMultigraph, EulerError> {
    if !g.is_eulerian(approx) {
        return Err(EulerError::InvalidInput(
            "greedy subgraph for gap analysis is not balanced".into(),
        ));
    }
    if !g.is_eulerian(exact) {
        return Err(EulerError::InvalidInput(
            "exact subgraph for gap analysis is not balanced".into(),
        ));
    }
    let mut edges = Vec::new();
    for e in 0..g.edge_count() {
        let (u, v) = g.edge(e);
        match (approx.contains(e), exact.contains(e)) {
            // Kept only by the exact solution: reversed, weight +1, so a
            // cycle through it corresponds to a real improvement step.
            (false, true) => edges.push((v.0, u.0, 1i8)),
            // Kept only by greedy: forward, weight -1.
            (true, false) => edges.push((u.0, v.0, -1i8)),
            // Agreement either way contributes nothing to the gap.
            _ => {}
        }
    }
    let out = SignedMultigraph {
        n: g.vertex_count(),
        edges,
    };
    debug_assert!({
        let mut bal = vec![0i64; out.n];
        for &(a, b, _) in &out.edges {
            bal[a as usize] += 1;
            bal[b as usize] -= 1;
        }
        bal.iter().all(|&x| x == 0)
    });
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct KCycleBin {
    /// Number of positive sign runs around the cycle.
    pub k: u32,
    pub cycles: usize,
    /// Total negative edges over the bin's cycles.
    pub delta_sum: u64,
    /// Total positive edges over the bin's cycles.
    pub delta_prime_sum: u64,
    pub ratio: f64,
}

/// One peeled audit cycle: its positive-run count and edge tallies.
#[derive(Debug, Clone, Serialize)]
pub struct KCycleRecord {
    pub k: u32,
    /// Negative (greedy-only) edges on the cycle.
    pub delta: u64,
    /// Positive (exact-only) edges; delta_prime - delta is the cycle's
    /// contribution to the gap.
    pub delta_prime: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KCycleReport {
    /// Edge count of the audited difference graph.
    pub gcal_edges: usize,
    pub cycle_count: usize,
    /// Sum of cycle weights = exact size minus greedy size.
    pub gap: i64,
    pub k_max: u32,
    /// Excess of long positive runs over each cycle's shortest negative
    /// run; the graph-level correction term of the bound.
    pub w_correction: u64,
    /// Cycles whose positive edges exceed k times their negative edges;
    /// counted, not rejected, since greedy path choices may break the
    /// per-cycle bound even though the accounting identity holds.
    pub k_bound_violations: usize,
    pub cycles: Vec<KCycleRecord>,
    pub bins: Vec<KCycleBin>,
}

pub fn kcycle_stats(m: &SignedMultigraph) -> Result<KCycleReport, EulerError> {
    let endpoints: Vec<(u32, u32)> = m.edges.iter().map(|&(a, b, _)| (a, b)).collect();
    let active = vec![true; endpoints.len()];
    let cycles = peel_edge_cycles(m.n, &endpoints, &active);
    let mut gap = 0i64;
    let mut k_max = 0u32;
    let mut w_correction = 0u64;
    let mut k_bound_violations = 0usize;
    let mut records = Vec::with_capacity(cycles.len());
    let mut by_k: Vec<(u32, usize, u64, u64)> = Vec::new();
    for cycle in &cycles {
        let signs: Vec<i8> = cycle.iter().map(|&e| m.edges[e].2).collect();
        let len = signs.len();
        let delta = signs.iter().filter(|&&s| s < 0).count() as u64;
        let delta_prime = signs.iter().filter(|&&s| s > 0).count() as u64;
        if delta == 0 || delta_prime == 0 {
            return Err(EulerError::invariant(
                "gap cycle with uniform sign; one of the inputs was not optimal-consistent",
            ));
        }
        let weight = delta_prime as i64 - delta as i64;
        if weight < 0 {
            return Err(EulerError::invariant(
                "gap cycle with negative weight; the exact subgraph is improvable",
            ));
        }
        gap += weight;
        // Cyclic maximal runs, starting at a negative-to-positive boundary.
        let start = (0..len)
            .find(|&i| signs[i] > 0 && signs[(i + len - 1) % len] < 0)
            .expect("mixed signs imply a boundary");
        let mut pos_runs: Vec<u64> = Vec::new();
        let mut neg_runs: Vec<u64> = Vec::new();
        let mut i = 0;
        while i < len {
            let s = signs[(start + i) % len];
            let mut run = 0u64;
            while i < len && signs[(start + i) % len] == s {
                run += 1;
                i += 1;
            }
            if s > 0 {
                pos_runs.push(run);
            } else {
                neg_runs.push(run);
            }
        }
        let k = pos_runs.len() as u32;
        debug_assert_eq!(k as usize, neg_runs.len(), "runs alternate cyclically");
        k_max = k_max.max(k);
        if delta_prime > k as u64 * delta {
            k_bound_violations += 1;
        }
        let shortest_neg = *neg_runs.iter().min().expect("at least one negative run");
        for &w_p in &pos_runs {
            w_correction += w_p.saturating_sub(shortest_neg);
        }
        records.push(KCycleRecord {
            k,
            delta,
            delta_prime,
        });
        match by_k.iter_mut().find(|b| b.0 == k) {
            Some(b) => {
                b.1 += 1;
                b.2 += delta;
                b.3 += delta_prime;
            }
            None => by_k.push((k, 1, delta, delta_prime)),
        }
    }
    by_k.sort_unstable_by_key(|b| b.0);
    let bins = by_k
        .into_iter()
        .map(|(k, cycles, delta_sum, delta_prime_sum)| KCycleBin {
            k,
            cycles,
            delta_sum,
            delta_prime_sum,
            ratio: delta_prime_sum as f64 / delta_sum as f64,
        })
        .collect();
    Ok(KCycleReport {
        gcal_edges: m.edges.len(),
        cycle_count: cycles.len(),
        gap,
        k_max,
        w_correction,
        k_bound_violations,
        cycles: records,
        bins,
    })
}

/// Closed-form gap ceiling (k-1)/(k+1) * m for the worst run count k over
/// a graph with m edges.
pub fn theoretical_bound(k_max: u32, m: usize) -> f64 {
    if k_max <= 1 {
        return 0.0;
    }
    (k_max as f64 - 1.0) / (k_max as f64 + 1.0) * m as f64
}

/// Exact integer form of gap <= (k-1)/(k+1) * m.
pub fn gap_within_bound(gap: i64, k_max: u32, m: usize) -> bool {
    if k_max <= 1 {
        return gap <= 0;
    }
    let k = k_max as i128;
    (gap as i128) * (k + 1) <= (k - 1) * m as i128
}

#[derive(Debug, Clone, Serialize)]
pub struct MobilityMatrix {
    pub groups: usize,
    /// `counts[i][j]`: vertices in group i of the first snapshot that land
    /// in group j of the second. Group index groups-1 is the top.
    pub counts: Vec<Vec<u64>>,
    /// Row-normalized counts; every row sums to 1.
    pub fractions: Vec<Vec<f64>>,
}

/// Splits both snapshots' hierarchies into `groups` near-equal groups
/// (sizes differ by at most one, extras go to the higher groups) and
/// counts group transitions. Both snapshots must share the vertex
/// universe.
pub fn mobility_matrix(
    g1: &DirectedGraph,
    r1: &Ranking,
    g2: &DirectedGraph,
    r2: &Ranking,
    groups: usize,
) -> Result<MobilityMatrix, EulerError> {
    let n = g1.vertex_count();
    if g2.vertex_count() != n || r1.vertex_count() != n || r2.vertex_count() != n {
        return Err(EulerError::InvalidInput(
            "mobility snapshots must share one vertex universe".into(),
        ));
    }
    if groups == 0 || groups > n {
        return Err(EulerError::InvalidInput(format!(
            "cannot split {n} vertices into {groups} groups"
        )));
    }
    let assign = |g: &DirectedGraph, r: &Ranking| -> Vec<usize> {
        let order = hierarchy_order(g, r);
        let mut group_of = vec![0usize; n];
        let base = n / groups;
        let extra = n % groups;
        let mut at = 0;
        for chunk in 0..groups {
            let size = base + usize::from(chunk < extra);
            for &v in &order[at..at + size] {
                group_of[v.index()] = groups - 1 - chunk;
            }
            at += size;
        }
        group_of
    };
    let a1 = assign(g1, r1);
    let a2 = assign(g2, r2);
    let mut counts = vec![vec![0u64; groups]; groups];
    for v in 0..n {
        counts[a1[v]][a2[v]] += 1;
    }
    let fractions = counts
        .iter()
        .map(|row| {
            let total: u64 = row.iter().sum();
            row.iter().map(|&c| c as f64 / total as f64).collect()
        })
        .collect();
    Ok(MobilityMatrix {
        groups,
        counts,
        fractions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionCall {
    /// First vertex points at the second.
    Forward,
    /// Second vertex points at the first.
    Backward,
    /// Equal ranks; no call.
    Undecided,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictionReport {
    pub total: usize,
    pub decided: usize,
    /// decided / total; null for an empty test set.
    pub coverage: Option<f64>,
    pub correct: Option<usize>,
    /// correct / decided over pairs with ground truth; null without truth
    /// or without decided pairs.
    pub accuracy: Option<f64>,
}

/// Calls each unordered pair toward the higher rank. With `truth` (a set
/// of directed edges) the report grades the decided calls.
pub fn predict_directions(
    r: &Ranking,
    pairs: &[(VertexId, VertexId)],
    truth: Option<&HashSet<(u32, u32)>>,
) -> (Vec<DirectionCall>, PredictionReport) {
    let mut calls = Vec::with_capacity(pairs.len());
    let mut decided = 0usize;
    let mut correct = 0usize;
    for &(a, b) in pairs {
        let call = match r.rank(b).cmp(&r.rank(a)) {
            std::cmp::Ordering::Greater => DirectionCall::Forward,
            std::cmp::Ordering::Less => DirectionCall::Backward,
            std::cmp::Ordering::Equal => DirectionCall::Undecided,
        };
        if call != DirectionCall::Undecided {
            decided += 1;
            if let Some(t) = truth {
                let hit = match call {
                    DirectionCall::Forward => t.contains(&(a.0, b.0)),
                    DirectionCall::Backward => t.contains(&(b.0, a.0)),
                    DirectionCall::Undecided => false,
                };
                if hit {
                    correct += 1;
                }
            }
        }
        calls.push(call);
    }
    let total = pairs.len();
    let report = PredictionReport {
        total,
        decided,
        coverage: (total > 0).then(|| decided as f64 / total as f64),
        correct: truth.map(|_| correct),
        accuracy: match (truth, decided) {
            (Some(_), d) if d > 0 => Some(correct as f64 / d as f64),
            _ => None,
        },
    };
    (calls, report)
}
