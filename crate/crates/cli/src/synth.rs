//! Seeded synthetic graph generators standing in for datasets that cannot
//! be redistributed: a planted hierarchy for direction-recovery checks and
//! a drifting snapshot series for mobility checks.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Directed edges over `n` vertices planted on `levels` hierarchy tiers
/// (vertex v sits on tier v * levels / n). Cross-tier pairs are sampled
/// uniformly and oriented from the lower tier to the higher one, except
/// that each edge flips direction with probability `flip_prob`.
pub fn planted_hierarchy(
    n: u32,
    levels: u32,
    target_edges: usize,
    flip_prob: f64,
    seed: u64,
) -> Vec<(u32, u32)> {
    assert!(n >= 2 && levels >= 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tier = |v: u32| (v as u64 * levels as u64 / n as u64) as u32;
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(target_edges);
    let mut attempts = 0usize;
    while edges.len() < target_edges && attempts < target_edges * 50 {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if tier(a) == tier(b) {
            continue;
        }
        let (lo, hi) = if tier(a) < tier(b) { (a, b) } else { (b, a) };
        let (u, v) = if rng.gen_bool(flip_prob) { (hi, lo) } else { (lo, hi) };
        if seen.insert((u, v)) {
            edges.push((u, v));
        }
    }
    edges
}

/// A series of edge lists over one vertex universe whose hierarchy slowly
/// drifts. Every vertex starts with score = its id; each snapshot samples
/// edges pointing from lower to higher score, then perturbs every score
/// uniformly within ±`drift`. Larger drift moves more vertices across
/// rank groups between snapshots.
pub fn drift_series(
    n: u32,
    snapshots: usize,
    edges_per: usize,
    drift: f64,
    seed: u64,
) -> Vec<Vec<(u32, u32)>> {
    assert!(n >= 2 && snapshots >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut score: Vec<f64> = (0..n).map(|v| v as f64).collect();
    let mut series = Vec::with_capacity(snapshots);
    for _ in 0..snapshots {
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(edges_per);
        let mut attempts = 0usize;
        while edges.len() < edges_per && attempts < edges_per * 50 {
            attempts += 1;
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b || score[a as usize] == score[b as usize] {
                continue;
            }
            let (u, v) = if score[a as usize] < score[b as usize] {
                (a, b)
            } else {
                (b, a)
            };
            if seen.insert((u, v)) {
                edges.push((u, v));
            }
        }
        series.push(edges);
        for s in score.iter_mut() {
            *s += rng.gen_range(-drift..=drift);
        }
    }
    series
}

/// Renders pairs in the edge-list input format.
pub fn to_edge_list(edges: &[(u32, u32)]) -> String {
    let mut s = String::new();
    for &(u, v) in edges {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}
