//! Command-line plumbing: argument parsing, solver dispatch, and the
//! machine-readable output files.
//!
//! Commands are deterministic given (input bytes, flags, seed): vertex ids
//! follow first appearance in the input, solvers are order-deterministic,
//! component results merge in component order regardless of thread count,
//! and no output carries a timestamp.

pub mod synth;

use std::collections::HashSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eulerdag::analysis::{
    build_gcal, gap_within_bound, kcycle_stats, mobility_matrix, predict_directions,
    theoretical_bound, DirectionCall, KCycleBin, PredictionReport,
};
use eulerdag::baseline::{dfseven, simple};
use eulerdag::decomp::Decomposition;
use eulerdag::error::EulerError;
use eulerdag::graph::{DirectedGraph, EdgeSet, VertexId};
use eulerdag::greedy::GreedyVariant;
use eulerdag::hierarchy::{assign_ranks, rank_distribution, Ranking};
use eulerdag::ingest::{align_snapshots, parse_edge_list, ParseStats, VertexNameMap};
use eulerdag::oracle::brute_force_max_euler_capped;
use eulerdag::refine::{greedy_and_refine, ComponentMetrics};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "eulerdag",
    version,
    about = "Decompose directed graphs into a maximum Eulerian subgraph plus a DAG, rank the hierarchy, and run the follow-up analyses"
)]
struct Cli {
    /// Worker threads for per-component solving; 0 means all cores.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: RunConfig,
}

/// One validated run: the chosen subcommand plus its inputs, algorithm,
/// output directory and flags.
#[derive(Subcommand)]
enum RunConfig {
    /// Split the input into balanced (E) and acyclic (D) edges.
    Decompose {
        /// Edge list: one "src dst" pair per line, '#' comments allowed.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::GrR)]
        algo: Algo,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also run the direct search and report how many of its cycle
        /// iterations the two-phase pipeline saved.
        #[arg(long)]
        compare_dfseven: bool,
    },
    /// Rank vertices from the acyclic part and emit the rank distribution.
    Rank {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::GrR)]
        algo: Algo,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Audit the greedy-vs-exact gap cycle by cycle.
    Stats {
        input: PathBuf,
        /// Must be a greedy variant; the audit needs both the greedy and
        /// the refined subgraph.
        #[arg(long, value_enum, default_value_t = Algo::GrD)]
        algo: Algo,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Transition matrix between hierarchy groups of two snapshots.
    Mobility {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::GrR)]
        algo: Algo,
        #[arg(long, default_value_t = 5)]
        groups: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Predict edge directions of held-out pairs from training-graph ranks.
    Predict {
        /// Training edge list; ranks come from its decomposition.
        train: PathBuf,
        /// Held-out directed edges; predictions are graded against them.
        test: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::GrR)]
        algo: Algo,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Cross-check all four solvers against the brute-force reference on
    /// seeded random graphs.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        count: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Upper bound on sampled edges per graph.
        #[arg(long, default_value_t = 14)]
        max_edges: usize,
        /// Refuse brute force beyond this many component-internal edges.
        #[arg(long, default_value_t = 20)]
        oracle_cap: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

impl RunConfig {
    fn out_dir(&self) -> &Path {
        match self {
            RunConfig::Decompose { out, .. }
            | RunConfig::Rank { out, .. }
            | RunConfig::Stats { out, .. }
            | RunConfig::Mobility { out, .. }
            | RunConfig::Predict { out, .. }
            | RunConfig::OracleCheck { out, .. } => out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    /// One full relaxation sweep per eliminated cycle; small inputs only.
    Simple,
    /// Direct depth-first negative-cycle elimination.
    Dfseven,
    /// Greedy path deletion, then refinement.
    GrD,
    /// Greedy path reversal, then refinement.
    GrR,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Simple => "simple",
            Algo::Dfseven => "dfseven",
            Algo::GrD => "gr-d",
            Algo::GrR => "gr-r",
        }
    }

    fn greedy_variant(self) -> Option<GreedyVariant> {
        match self {
            Algo::GrD => Some(GreedyVariant::Delete),
            Algo::GrR => Some(GreedyVariant::Reverse),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    Core(EulerError),
}

impl From<EulerError> for CliError {
    fn from(e: EulerError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Core(e) => match e {
                EulerError::Parse { .. } | EulerError::Io(_) => 2,
                EulerError::InvalidInput(_) | EulerError::EdgeCapExceeded { .. } => 1,
                EulerError::Invariant { .. } => 3,
            },
        }
    }

    fn report(&self, out_dir: &Path) {
        match self {
            CliError::Usage(m) => eprintln!("error: {m}"),
            CliError::Io { path, source } => {
                eprintln!("error: {}: {source}", path.display())
            }
            CliError::Parse {
                path,
                line,
                message,
            } => eprintln!("error: {}:{line}: {message}", path.display()),
            CliError::Core(e) => {
                eprintln!("error: {e}");
                if let EulerError::Invariant {
                    dump: Some(dump), ..
                } = e
                {
                    let path = out_dir.join("invariant_component.txt");
                    let mut body = format!("# component {}\n", dump.component_id);
                    for &(u, v) in &dump.edges {
                        let _ = writeln!(body, "{u} {v}");
                    }
                    if fs::create_dir_all(out_dir).is_ok() && fs::write(&path, body).is_ok() {
                        eprintln!("offending component written to {}", path.display());
                    }
                }
            }
        }
    }
}

/// Parses arguments, runs the command, reports errors; returns the exit
/// code: 0 ok, 1 usage, 2 I/O or parse, 3 internal invariant breach.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    if cli.threads > 0 {
        // Ignore failure: the global pool can only be sized once per
        // process and a fallback default pool is fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let out_dir = cli.command.out_dir().to_path_buf();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            e.report(&out_dir);
            e.exit_code()
        }
    }
}

fn dispatch(cmd: RunConfig) -> Result<(), CliError> {
    match cmd {
        RunConfig::Decompose {
            input,
            algo,
            out,
            compare_dfseven,
        } => cmd_decompose(&input, algo, &out, compare_dfseven),
        RunConfig::Rank { input, algo, out } => cmd_rank(&input, algo, &out),
        RunConfig::Stats { input, algo, out } => cmd_stats(&input, algo, &out),
        RunConfig::Mobility {
            first,
            second,
            algo,
            groups,
            out,
        } => cmd_mobility(&first, &second, algo, groups, &out),
        RunConfig::Predict {
            train,
            test,
            algo,
            out,
        } => cmd_predict(&train, &test, algo, &out),
        RunConfig::OracleCheck {
            count,
            seed,
            max_edges,
            oracle_cap,
            out,
        } => cmd_oracle_check(count, seed, max_edges, oracle_cap, &out),
    }
}

struct Solved {
    d: Decomposition,
    cycles_reversed: u64,
    refine_iterations: Option<u64>,
    l_max: Option<u32>,
    greedy_approx: Option<EdgeSet>,
    components: Option<Vec<ComponentMetrics>>,
}

fn solve(g: &DirectedGraph, algo: Algo) -> Result<Solved, CliError> {
    Ok(match algo {
        Algo::Simple => {
            let (d, s) = simple(g)?;
            Solved {
                d,
                cycles_reversed: s.cycles_reversed,
                refine_iterations: None,
                l_max: None,
                greedy_approx: None,
                components: None,
            }
        }
        Algo::Dfseven => {
            let (d, s) = dfseven(g);
            Solved {
                d,
                cycles_reversed: s.cycles_reversed,
                refine_iterations: None,
                l_max: None,
                greedy_approx: None,
                components: None,
            }
        }
        Algo::GrD | Algo::GrR => {
            let variant = algo.greedy_variant().expect("greedy arm");
            let r = greedy_and_refine(g, variant)?;
            Solved {
                d: r.decomposition,
                cycles_reversed: r.cycles_reversed,
                refine_iterations: Some(r.cycles_reversed),
                l_max: Some(r.l_max),
                greedy_approx: Some(r.greedy_approx),
                components: Some(r.components),
            }
        }
    })
}

fn load_graph(path: &Path) -> Result<(DirectedGraph, VertexNameMap, ParseStats), CliError> {
    let file = fs::File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_edge_list(BufReader::new(file)).map_err(|e| match e {
        EulerError::Parse { line, message } => CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        },
        EulerError::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => CliError::Core(other),
    })
}

fn write_text(out_dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let path = out_dir.join(name);
    fs::write(&path, body).map_err(|source| CliError::Io { path, source })
}

fn write_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut body = serde_json::to_string_pretty(value).expect("serializable output");
    body.push('\n');
    write_text(out_dir, name, &body)
}

#[derive(Serialize)]
struct Metrics<'a> {
    schema: u32,
    algo: &'a str,
    n: usize,
    m: usize,
    self_loops_dropped: usize,
    duplicates_dropped: usize,
    e_euler: usize,
    v_euler: usize,
    cycles_reversed: u64,
    refine_iterations: Option<u64>,
    iterations_saved_pct: Option<f64>,
    l_max: Option<u32>,
    components: Option<&'a [ComponentMetrics]>,
}

fn cmd_decompose(
    input: &Path,
    algo: Algo,
    out: &Path,
    compare_dfseven: bool,
) -> Result<(), CliError> {
    if compare_dfseven && algo.greedy_variant().is_none() {
        return Err(CliError::Usage(
            "--compare-dfseven needs --algo gr-d or gr-r".into(),
        ));
    }
    let (g, names, parse_stats) = load_graph(input)?;
    let solved = solve(&g, algo)?;
    let mut lines = String::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let side = if solved.d.euler.contains(e) { 'E' } else { 'D' };
        let _ = writeln!(lines, "{} {} {side}", names.name(u), names.name(v));
    }
    write_text(out, "decomposition.txt", &lines)?;
    let iterations_saved_pct = if compare_dfseven {
        let (_, base) = dfseven(&g);
        (base.cycles_reversed > 0).then(|| {
            (1.0 - solved.cycles_reversed as f64 / base.cycles_reversed as f64) * 100.0
        })
    } else {
        None
    };
    let metrics = Metrics {
        schema: SCHEMA_VERSION,
        algo: algo.name(),
        n: g.vertex_count(),
        m: g.edge_count(),
        self_loops_dropped: parse_stats.self_loops_dropped,
        duplicates_dropped: parse_stats.duplicates_dropped,
        e_euler: solved.d.euler.len(),
        v_euler: solved.d.euler_vertex_count(&g),
        cycles_reversed: solved.cycles_reversed,
        refine_iterations: solved.refine_iterations,
        iterations_saved_pct,
        l_max: solved.l_max,
        components: solved.components.as_deref(),
    };
    write_json(out, "metrics.json", &metrics)
}

#[derive(Serialize)]
struct HistogramOut<'a> {
    schema: u32,
    algo: &'a str,
    bins: &'a [eulerdag::hierarchy::RankBin],
}

fn cmd_rank(input: &Path, algo: Algo, out: &Path) -> Result<(), CliError> {
    let (g, names, _) = load_graph(input)?;
    let solved = solve(&g, algo)?;
    let r = assign_ranks(&g, &solved.d)?;
    let mut tsv = String::new();
    for v in g.vertices() {
        let _ = writeln!(tsv, "{}\t{}", names.name(v), r.rank(v));
    }
    write_text(out, "ranking.tsv", &tsv)?;
    let hist = rank_distribution(&g, &r);
    write_json(
        out,
        "rank_histogram.json",
        &HistogramOut {
            schema: SCHEMA_VERSION,
            algo: algo.name(),
            bins: &hist.bins,
        },
    )
}

#[derive(Serialize)]
struct StatsOut<'a> {
    schema: u32,
    algo: &'a str,
    n: usize,
    m: usize,
    greedy_size: usize,
    e_euler: usize,
    v_euler: usize,
    measured_gap: i64,
    g_cal_edges: usize,
    w_correction: u64,
    k_max: u32,
    k_bound_violations: usize,
    k_bins: &'a [KCycleBin],
    theoretical_bound: f64,
    bound_satisfied: bool,
}

fn cmd_stats(input: &Path, algo: Algo, out: &Path) -> Result<(), CliError> {
    if algo.greedy_variant().is_none() {
        return Err(CliError::Usage(
            "stats needs a greedy algorithm (--algo gr-d or gr-r); the audit compares its result against the refined one".into(),
        ));
    }
    let (g, _, _) = load_graph(input)?;
    let solved = solve(&g, algo)?;
    let approx = solved.greedy_approx.as_ref().expect("greedy pipeline ran");
    let exact = &solved.d.euler;
    let gcal = build_gcal(&g, approx, exact)?;
    let stats = kcycle_stats(&gcal)?;
    debug_assert_eq!(stats.gap, exact.len() as i64 - approx.len() as i64);
    let report = StatsOut {
        schema: SCHEMA_VERSION,
        algo: algo.name(),
        n: g.vertex_count(),
        m: g.edge_count(),
        greedy_size: approx.len(),
        e_euler: exact.len(),
        v_euler: solved.d.euler_vertex_count(&g),
        measured_gap: stats.gap,
        g_cal_edges: stats.gcal_edges,
        w_correction: stats.w_correction,
        k_max: stats.k_max,
        k_bound_violations: stats.k_bound_violations,
        k_bins: &stats.bins,
        theoretical_bound: theoretical_bound(stats.k_max, g.edge_count()),
        bound_satisfied: gap_within_bound(stats.gap, stats.k_max, g.edge_count()),
    };
    write_json(out, "stats.json", &report)
}

fn cmd_mobility(
    first: &Path,
    second: &Path,
    algo: Algo,
    groups: usize,
    out: &Path,
) -> Result<(), CliError> {
    let (g1, n1, _) = load_graph(first)?;
    let (g2, n2, _) = load_graph(second)?;
    let series = align_snapshots(&[(g1, n1), (g2, n2)]);
    let rank_of = |g: &DirectedGraph| -> Result<Ranking, CliError> {
        let solved = solve(g, algo)?;
        Ok(assign_ranks(g, &solved.d)?)
    };
    let r1 = rank_of(&series.graphs[0])?;
    let r2 = rank_of(&series.graphs[1])?;
    let matrix = mobility_matrix(&series.graphs[0], &r1, &series.graphs[1], &r2, groups)?;
    let mut csv = String::from("group");
    for j in 0..groups {
        let _ = write!(csv, ",{}", j + 1);
    }
    csv.push('\n');
    for i in 0..groups {
        let _ = write!(csv, "{}", i + 1);
        for j in 0..groups {
            let _ = write!(csv, ",{:.6}", matrix.fractions[i][j]);
        }
        csv.push('\n');
    }
    write_text(out, "mobility.csv", &csv)
}

#[derive(Serialize)]
struct PredictionOut {
    schema: u32,
    #[serde(flatten)]
    report: PredictionReport,
}

fn cmd_predict(train: &Path, test: &Path, algo: Algo, out: &Path) -> Result<(), CliError> {
    let (g, names, _) = load_graph(train)?;
    let solved = solve(&g, algo)?;
    let r = assign_ranks(&g, &solved.d)?;
    let pairs = load_pairs(test)?;

    // Pairs with a vertex missing from the training graph stay undecided.
    let mut known: Vec<(VertexId, VertexId)> = Vec::new();
    let mut known_at: Vec<Option<usize>> = Vec::with_capacity(pairs.len());
    for (a, b) in &pairs {
        let ids = (names.id(a), names.id(b));
        if let (Some(u), Some(v)) = ids {
            if u != v {
                known_at.push(Some(known.len()));
                known.push((u, v));
                continue;
            }
        }
        known_at.push(None);
    }
    let truth: HashSet<(u32, u32)> = known.iter().map(|&(u, v)| (u.0, v.0)).collect();
    let (calls, graded) = predict_directions(&r, &known, Some(&truth));

    let mut tsv = String::new();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let call = known_at[i].map(|k| calls[k]).unwrap_or(DirectionCall::Undecided);
        let shown = match call {
            DirectionCall::Forward => format!("{a}->{b}"),
            DirectionCall::Backward => format!("{b}->{a}"),
            DirectionCall::Undecided => "unknown".to_string(),
        };
        let _ = writeln!(tsv, "{a}\t{b}\t{shown}");
    }
    write_text(out, "predictions.tsv", &tsv)?;

    let total = pairs.len();
    let report = PredictionReport {
        total,
        decided: graded.decided,
        coverage: (total > 0).then(|| graded.decided as f64 / total as f64),
        correct: graded.correct,
        accuracy: graded.accuracy,
    };
    write_json(
        out,
        "prediction_report.json",
        &PredictionOut {
            schema: SCHEMA_VERSION,
            report,
        },
    )
}

/// Reads whitespace-separated label pairs, keeping file order; comments
/// and blank lines are skipped, duplicates are kept.
fn load_pairs(path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let body = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut pairs = Vec::new();
    for (lineno, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!("expected two whitespace-separated tokens, got {line:?}"),
            });
        };
        pairs.push((a.to_string(), b.to_string()));
    }
    Ok(pairs)
}

#[derive(Serialize)]
struct OracleMismatch {
    index: u32,
    n: usize,
    m: usize,
    oracle: usize,
    simple: usize,
    dfseven: usize,
    gr_d: usize,
    gr_r: usize,
}

#[derive(Serialize)]
struct OracleReport {
    schema: u32,
    seed: u64,
    count: u32,
    max_edges: usize,
    oracle_cap: usize,
    checked: u32,
    all_equal: bool,
    mismatches: Vec<OracleMismatch>,
}

fn cmd_oracle_check(
    count: u32,
    seed: u64,
    max_edges: usize,
    oracle_cap: usize,
    out: &Path,
) -> Result<(), CliError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    for index in 0..count {
        let n = rng.gen_range(2..=6u32);
        let target = rng.gen_range(0..=max_edges);
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        let mut attempts = 0;
        while pairs.len() < target && attempts < target * 30 + 30 {
            attempts += 1;
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && seen.insert((u, v)) {
                pairs.push((u, v));
            }
        }
        let g = DirectedGraph::from_pairs(n as usize, &pairs);
        let oracle = brute_force_max_euler_capped(&g, oracle_cap)?.best_size;
        let simple_size = simple(&g)?.0.euler.len();
        let dfseven_size = dfseven(&g).0.euler.len();
        let gr_d = greedy_and_refine(&g, GreedyVariant::Delete)?.decomposition.euler.len();
        let gr_r = greedy_and_refine(&g, GreedyVariant::Reverse)?.decomposition.euler.len();
        if [simple_size, dfseven_size, gr_d, gr_r].iter().any(|&s| s != oracle) {
            mismatches.push(OracleMismatch {
                index,
                n: g.vertex_count(),
                m: g.edge_count(),
                oracle,
                simple: simple_size,
                dfseven: dfseven_size,
                gr_d,
                gr_r,
            });
        }
    }
    let all_equal = mismatches.is_empty();
    let report = OracleReport {
        schema: SCHEMA_VERSION,
        seed,
        count,
        max_edges,
        oracle_cap,
        checked: count,
        all_equal,
        mismatches,
    };
    write_json(out, "oracle_check.json", &report)?;
    if all_equal {
        println!("oracle-check: {count} graphs, all four solvers match the brute force");
        Ok(())
    } else {
        Err(CliError::Core(EulerError::invariant(format!(
            "oracle-check: {} of {count} graphs disagree with the brute force (see oracle_check.json)",
            report.mismatches.len()
        ))))
    }
}
