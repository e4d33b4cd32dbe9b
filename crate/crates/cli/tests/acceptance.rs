//! Acceptance gate: one test per numbered criterion. Each prints a single
//! "criterion N: ..." line, visible with --nocapture or --show-output.
//!
//! Criteria 1, 2, 5 and 6 need the public wiki-Vote and p2p-Gnutella31
//! edge lists under data/ at the repository root; when a file is missing
//! the test prints a SKIP line with the drop-in path instead of failing.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use eulerdag::analysis::{build_gcal, kcycle_stats};
use eulerdag::baseline::{dfseven, simple, ArcView, CycleSearch};
use eulerdag::cycle::peel_cycles;
use eulerdag::decomp::{audit_no_negative_cycle, dag_is_acyclic, Decomposition};
use eulerdag::graph::{DirectedGraph, VertexId};
use eulerdag::greedy::{greedy, move_cycles, GreedyVariant};
use eulerdag::hierarchy::{agony, assign_ranks, strictly_higher_pairs, Ranking};
use eulerdag::ingest::parse_edge_list_path;
use eulerdag::oracle::brute_force_max_euler;
use eulerdag::refine::{greedy_and_refine, init_dst};

/// 14 vertices, 22 edges; the maximum balanced part keeps 16 of them.
fn running_example() -> DirectedGraph {
    DirectedGraph::from_pairs(
        14,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 0),
            (2, 5),
            (5, 2),
            (3, 5),
            (5, 3),
            (5, 6),
            (6, 7),
            (6, 8),
            (8, 9),
            (9, 10),
            (10, 11),
            (11, 12),
            (12, 5),
            (1, 3),
            (3, 0),
            (7, 3),
            (2, 13),
            (13, 12),
        ],
    )
}

fn data_path(name: &str) -> PathBuf {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    root.canonicalize().unwrap_or(root).join("data").join(name)
}

fn load_dataset(criterion: &str, name: &str) -> Option<DirectedGraph> {
    let path = data_path(name);
    if !path.exists() {
        println!(
            "{criterion}: SKIP - dataset missing; download the public SNAP edge list {name} \
             and place it at {}, then re-run",
            path.display()
        );
        return None;
    }
    let (g, _, _) = parse_edge_list_path(&path).expect("dataset parses");
    Some(g)
}

fn random_graph(rng: &mut StdRng, max_n: u32, max_m: usize) -> DirectedGraph {
    let n = rng.gen_range(1..=max_n);
    let possible = (n as usize) * (n as usize - 1);
    let target = rng.gen_range(0..=max_m.min(possible));
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    let mut attempts = 0;
    while pairs.len() < target && attempts < 40 * target + 40 {
        attempts += 1;
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && seen.insert((u, v)) {
            pairs.push((u, v));
        }
    }
    DirectedGraph::from_pairs(n as usize, &pairs)
}

fn assert_valid(g: &DirectedGraph, d: &Decomposition) {
    assert_eq!(d.euler.len() + d.dag.len(), g.edge_count());
    assert!(d.euler.is_disjoint(&d.dag));
    assert!(g.is_eulerian(&d.euler));
    assert!(dag_is_acyclic(g, &d.dag));
    d.check(g).expect("self check");
    assert!(audit_no_negative_cycle(g, d));
}

/// Runs the three scalable pipelines, asserting each finishes under the
/// budget; returns (label, decomposition, elapsed).
fn timed_pipelines(g: &DirectedGraph, budget: Duration) -> Vec<(&'static str, Decomposition)> {
    let mut out = Vec::new();
    let t = Instant::now();
    let (d, _) = dfseven(g);
    let dt = t.elapsed();
    assert!(dt < budget, "dfseven took {dt:?}, budget {budget:?}");
    out.push(("dfseven", d));
    for (label, variant) in [
        ("gr-d", GreedyVariant::Delete),
        ("gr-r", GreedyVariant::Reverse),
    ] {
        let t = Instant::now();
        let r = greedy_and_refine(g, variant).unwrap();
        let dt = t.elapsed();
        assert!(dt < budget, "{label} took {dt:?}, budget {budget:?}");
        out.push((label, r.decomposition));
    }
    out
}

fn expect_sizes(
    criterion: &str,
    g: &DirectedGraph,
    want_edges: usize,
    want_vertices: usize,
) {
    for (label, d) in timed_pipelines(g, Duration::from_secs(10)) {
        assert_eq!(
            d.euler.len(),
            want_edges,
            "{criterion}: {label} kept {} edges, want {want_edges}",
            d.euler.len()
        );
        assert_eq!(
            d.euler_vertex_count(g),
            want_vertices,
            "{criterion}: {label} touched {} vertices, want {want_vertices}",
            d.euler_vertex_count(g)
        );
    }
    println!(
        "{criterion}: PASS - dfseven, gr-d and gr-r each keep {want_edges} edges over \
         {want_vertices} vertices in under 10s"
    );
}

#[test]
fn criterion_1_wiki_vote_exact_sizes() {
    let Some(g) = load_dataset("criterion 1", "wiki-Vote.txt") else {
        return;
    };
    expect_sizes("criterion 1", &g, 17_676, 1_286);
}

#[test]
fn criterion_2_gnutella_exact_sizes() {
    let Some(g) = load_dataset("criterion 2", "p2p-Gnutella31.txt") else {
        return;
    };
    expect_sizes("criterion 2", &g, 18_964, 11_952);
}

#[test]
fn criterion_3_solvers_match_brute_force_on_500_random_graphs() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x0dac1e);
    for i in 0..500 {
        let g = random_graph(&mut rng, 8, 14);
        let best = brute_force_max_euler(&g).unwrap().best_size;
        let sizes = [
            ("simple", simple(&g).unwrap().0.euler.len()),
            ("dfseven", dfseven(&g).0.euler.len()),
            (
                "gr-d",
                greedy_and_refine(&g, GreedyVariant::Delete)
                    .unwrap()
                    .decomposition
                    .euler
                    .len(),
            ),
            (
                "gr-r",
                greedy_and_refine(&g, GreedyVariant::Reverse)
                    .unwrap()
                    .decomposition
                    .euler
                    .len(),
            ),
        ];
        for (label, size) in sizes {
            assert_eq!(
                size, best,
                "graph {i}: {label} kept {size} edges, brute force keeps {best}: {:?}",
                g.edges()
            );
        }
    }
    let dt = start.elapsed();
    assert!(dt < Duration::from_secs(120), "took {dt:?}, budget 2min");
    println!("criterion 3: PASS - 500 random graphs, all four solvers equal the brute force ({dt:?})");
}

#[test]
fn criterion_4_fixture_traces() {
    // Probe graph: one cycle hanging off a source, plus a stray edge.
    // Ids: 0 is the source; the cycle is 1 -> 2 -> 3 -> 1.
    let probe = DirectedGraph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 1), (0, 4)]);
    let mut search = CycleSearch::new(ArcView::new(&probe));
    assert!(search.dfs_spfa(VertexId(0)), "first search must find the cycle");
    assert_eq!(
        search.state.dst,
        vec![0, -4, -2, -3, 0],
        "settled distances at first detection"
    );
    assert_eq!(search.nv(), Some(VertexId(1)), "cycle entry vertex");
    let (d, _) = dfseven(&probe);
    let kept: Vec<(u32, u32)> = d
        .euler
        .iter()
        .map(|e| {
            let (u, v) = probe.edge(e);
            (u.0, v.0)
        })
        .collect();
    assert_eq!(kept, vec![(1, 2), (2, 3), (3, 1)], "balanced part is the cycle");

    let g = running_example();
    assert_eq!(simple(&g).unwrap().0.euler.len(), 16);
    assert_eq!(dfseven(&g).0.euler.len(), 16);
    for variant in [GreedyVariant::Delete, GreedyVariant::Reverse] {
        assert_eq!(
            greedy_and_refine(&g, variant).unwrap().decomposition.euler.len(),
            16
        );
    }
    println!(
        "criterion 4: PASS - probe graph reproduces dst {{-4,-2,-3}} with the cycle entered \
         at its detection vertex, and every pipeline keeps 16 of 22 edges on the running example"
    );
}

#[test]
fn criterion_5_refinement_saves_iterations_on_wiki_vote() {
    let Some(g) = load_dataset("criterion 5", "wiki-Vote.txt") else {
        return;
    };
    let (_, base) = dfseven(&g);
    assert!(base.cycles_reversed > 0, "direct search reverses no cycles");
    let mut saved = Vec::new();
    for (label, variant) in [
        ("gr-d", GreedyVariant::Delete),
        ("gr-r", GreedyVariant::Reverse),
    ] {
        let r = greedy_and_refine(&g, variant).unwrap();
        assert!(
            (r.cycles_reversed as f64) < 0.10 * base.cycles_reversed as f64,
            "{label}: refinement reversed {} cycles, direct search {}; want under 10%",
            r.cycles_reversed,
            base.cycles_reversed
        );
        saved.push(format!(
            "{label} {:.1}%",
            100.0 * (1.0 - r.cycles_reversed as f64 / base.cycles_reversed as f64)
        ));
    }
    println!(
        "criterion 5: PASS - iteration savings over dfseven's {} cycles: {}",
        base.cycles_reversed,
        saved.join(", ")
    );
}

#[test]
fn criterion_6_greedy_quality_ratio() {
    let mut lines = Vec::new();
    for (name, file) in [
        ("wiki-Vote", "wiki-Vote.txt"),
        ("Gnutella", "p2p-Gnutella31.txt"),
    ] {
        let Some(g) = load_dataset("criterion 6", file) else {
            return;
        };
        let exact = dfseven(&g).0.euler.len() as f64;
        for (label, variant) in [
            ("gr-d", GreedyVariant::Delete),
            ("gr-r", GreedyVariant::Reverse),
        ] {
            let r = greedy_and_refine(&g, variant).unwrap();
            let ratio = r.greedy_approx.len() as f64 / exact;
            // The delete variant on Gnutella is the known worst case:
            // reported, not asserted.
            if label == "gr-r" {
                assert!(
                    ratio >= 0.90,
                    "{name} {label}: greedy/exact ratio {ratio:.4} below 0.90"
                );
            }
            lines.push(format!("{name} {label} {ratio:.4}"));
        }
    }
    println!("criterion 6: PASS - greedy/exact ratios: {}", lines.join(", "));
}

#[test]
fn criterion_7_property_suite() {
    let mut rng = StdRng::seed_from_u64(0x9209);
    for case in 0..60 {
        let g = random_graph(&mut rng, 14, 45);
        let m = g.edge_count() as i64;

        let (dd, stats) = dfseven(&g);
        assert_valid(&g, &dd);
        assert!(
            stats.min_dst <= 0 && stats.min_dst >= -4 * m,
            "case {case}: terminal distance {} outside [-4m, 0]",
            stats.min_dst
        );

        // Peeling the balanced part covers each edge exactly once.
        let mut covered = HashSet::new();
        for cycle in peel_cycles(&g, &dd.euler) {
            for e in cycle {
                assert!(dd.euler.contains(e));
                assert!(covered.insert(e), "case {case}: edge peeled twice");
            }
        }
        assert_eq!(covered.len(), dd.euler.len());

        for variant in [GreedyVariant::Delete, GreedyVariant::Reverse] {
            let out = greedy(&g, variant).unwrap();
            let mut approx = out.approx;
            move_cycles(&g, &mut approx);
            let dst = init_dst(&g, &approx).unwrap();
            for e in approx.complement().iter() {
                let (u, v) = g.edge(e);
                assert!(
                    dst[u.index()] - 1 >= dst[v.index()],
                    "case {case}: left-over edge still relaxable after settling"
                );
            }

            let r = greedy_and_refine(&g, variant).unwrap();
            assert_valid(&g, &r.decomposition);
            assert_eq!(r.decomposition.euler.len(), dd.euler.len());

            // Audit-cycle accounting: weights are non-negative (or
            // kcycle_stats errors) and sum to the measured gap.
            let gcal = build_gcal(&g, &r.greedy_approx, &r.decomposition.euler).unwrap();
            let kstats = kcycle_stats(&gcal).unwrap();
            assert_eq!(
                kstats.gap,
                r.decomposition.euler.len() as i64 - r.greedy_approx.len() as i64
            );
        }

        // Any ranking pays at least the balanced part in agony.
        let floor = dd.euler.len() as u64;
        let r = assign_ranks(&g, &dd).unwrap();
        assert!(agony(&g, &r) >= floor);
        let span = r.max_rank() + 2;
        for _ in 0..1_000 {
            let random: Vec<u32> = (0..g.vertex_count())
                .map(|_| rng.gen_range(0..span))
                .collect();
            assert!(agony(&g, &Ranking::from_ranks(random)) >= floor);
        }
    }
    println!("criterion 7: PASS - 60 random instances, all solver and audit invariants hold");
}

/// Ordered strictly-higher pairs from one solver run.
fn verdicts(g: &DirectedGraph, d: &Decomposition) -> Vec<(u32, u32)> {
    let r = assign_ranks(g, d).expect("acyclic part ranks");
    strictly_higher_pairs(g, d, &r)
}

fn assert_no_opposite_verdicts(g: &DirectedGraph, a: &Decomposition, b: &Decomposition) {
    let pa = verdicts(g, a);
    let pb: HashSet<(u32, u32)> = verdicts(g, b).into_iter().collect();
    for (u, v) in pa {
        assert!(
            !pb.contains(&(v, u)),
            "opposite verdicts for ({u}, {v}) on {:?}",
            g.edges()
        );
    }
}

#[test]
fn criterion_8_verdicts_never_flip_between_solvers() {
    let start = Instant::now();
    // Exhaustive sweep: every digraph on up to 5 labeled vertices.
    let mut total = 0u64;
    for n in 0..=5usize {
        let slots: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (0..n as u32).filter_map(move |v| (u != v).then_some((u, v))))
            .collect();
        let masks = 1u64 << slots.len();
        total += masks;
        (0..masks).into_par_iter().for_each(|mask| {
            let pairs: Vec<(u32, u32)> = slots
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = DirectedGraph::from_pairs(n, &pairs);
            let (d1, _) = dfseven(&g);
            let d2 = greedy_and_refine(&g, GreedyVariant::Reverse)
                .unwrap()
                .decomposition;
            assert_no_opposite_verdicts(&g, &d1, &d2);
        });
    }
    // Random spot checks one size up, across all three solvers.
    let mut rng = StdRng::seed_from_u64(0x8e9d);
    for _ in 0..200 {
        let g = random_graph(&mut rng, 7, 42);
        let (d1, _) = dfseven(&g);
        let d2 = greedy_and_refine(&g, GreedyVariant::Reverse)
            .unwrap()
            .decomposition;
        let d3 = greedy_and_refine(&g, GreedyVariant::Delete)
            .unwrap()
            .decomposition;
        assert_no_opposite_verdicts(&g, &d1, &d2);
        assert_no_opposite_verdicts(&g, &d1, &d3);
        assert_no_opposite_verdicts(&g, &d2, &d3);
    }
    println!(
        "criterion 8: PASS - {total} exhaustive digraphs (n <= 5) plus 200 random n <= 7, \
         no vertex pair ever ranks strictly higher both ways ({:?})",
        start.elapsed()
    );
}

fn run_cli(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_eulerdag"))
        .args(args)
        .status()
        .expect("binary runs");
    assert!(status.success(), "eulerdag {args:?} failed: {status}");
}

fn dir_snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .expect("output dir")
        .map(|entry| {
            let entry = entry.unwrap();
            (
                entry.file_name().to_string_lossy().into_owned(),
                fs::read(entry.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn criterion_9_outputs_are_byte_identical_across_runs_and_threads() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("graph.txt");
    let pairs = eulerdag_cli::synth::planted_hierarchy(250, 6, 1_500, 0.12, 99);
    fs::write(&input, eulerdag_cli::synth::to_edge_list(&pairs)).unwrap();
    let input = input.to_str().unwrap();

    let mut snapshots = Vec::new();
    for (run, threads) in [("a", "1"), ("b", "1"), ("c", "4")] {
        let out = tmp.path().join(run);
        let out_s = out.to_str().unwrap().to_string();
        run_cli(&["--threads", threads, "decompose", input, "--algo", "gr-r", "--out", &out_s]);
        run_cli(&["--threads", threads, "rank", input, "--algo", "gr-r", "--out", &out_s]);
        run_cli(&["--threads", threads, "stats", input, "--algo", "gr-d", "--out", &out_s]);
        snapshots.push(dir_snapshot(&out));
    }
    assert_eq!(snapshots[0], snapshots[1], "two identical runs differ");
    assert_eq!(snapshots[0], snapshots[2], "thread count changed the output");
    assert!(
        snapshots[0].iter().any(|(name, _)| name == "decomposition.txt"),
        "expected outputs present"
    );
    println!(
        "criterion 9: PASS - decompose, rank and stats outputs byte-identical across two runs \
         and across --threads 1 vs 4"
    );
}
