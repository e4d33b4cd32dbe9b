//! Edge-list parsing, vertex label interning, and snapshot alignment.
//!
//! Input format: one `src dst` pair per line, whitespace separated. Lines
//! starting with `#` and blank lines are ignored. Labels are opaque tokens
//! interned to dense ids in first-appearance order.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::EulerError;
use crate::graph::{DirectedGraph, VertexId};

/// Bidirectional label <-> dense id mapping.
#[derive(Debug, Clone, Default)]
pub struct VertexNameMap {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl VertexNameMap {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn id(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied().map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    /// Id sequence iterates labels in assignment order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn intern(&mut self, name: &str) -> VertexId {
        if let Some(&id) = self.index.get(name) {
            return VertexId(id);
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        VertexId(id)
    }
}

/// Counts of input lines dropped during normalization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseStats {
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Parses an edge list. Self-loops and duplicate edges are dropped and
/// counted; a line with anything other than two tokens is an error carrying
/// its 1-based line number.
pub fn parse_edge_list<R: BufRead>(
    reader: R,
) -> Result<(DirectedGraph, VertexNameMap, ParseStats), EulerError> {
    let mut names = VertexNameMap::default();
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut stats = ParseStats::default();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(EulerError::Parse {
                line: lineno + 1,
                message: format!("expected two whitespace-separated tokens, got {line:?}"),
            });
        };
        let u = names.intern(a);
        let v = names.intern(b);
        if u == v {
            stats.self_loops_dropped += 1;
            continue;
        }
        if !seen.insert((u.0, v.0)) {
            stats.duplicates_dropped += 1;
            continue;
        }
        edges.push((u, v));
    }

    let graph = DirectedGraph::new(names.len(), edges).expect("normalized edges are valid");
    Ok((graph, names, stats))
}

pub fn parse_edge_list_path(
    path: &std::path::Path,
) -> Result<(DirectedGraph, VertexNameMap, ParseStats), EulerError> {
    let file = std::fs::File::open(path)?;
    parse_edge_list(std::io::BufReader::new(file))
}

/// Writes the graph back in the input format: a header comment with the
/// vertex and edge counts, then one labeled edge per line in index order.
pub fn write_edge_list<W: Write>(
    mut w: W,
    g: &DirectedGraph,
    names: &VertexNameMap,
) -> std::io::Result<()> {
    writeln!(w, "# n={} m={}", g.vertex_count(), g.edge_count())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{} {}", names.name(u), names.name(v))?;
    }
    Ok(())
}

/// Snapshots re-indexed over the union of their vertex sets.
#[derive(Debug, Clone)]
pub struct SnapshotSeries {
    pub names: VertexNameMap,
    pub graphs: Vec<DirectedGraph>,
}

/// Aligns a sequence of independently parsed snapshots onto one shared
/// vertex universe (the union). Ids are assigned by first appearance across
/// the sequence; every aligned graph has the full union's vertex count, and
/// per-snapshot edge order is preserved.
pub fn align_snapshots(snapshots: &[(DirectedGraph, VertexNameMap)]) -> SnapshotSeries {
    let mut names = VertexNameMap::default();
    for (_, snap_names) in snapshots {
        for name in snap_names.names() {
            names.intern(name);
        }
    }
    let n = names.len();
    let graphs = snapshots
        .iter()
        .map(|(g, snap_names)| {
            let edges = g
                .edges()
                .iter()
                .map(|&(u, v)| {
                    let nu = names.id(snap_names.name(u)).expect("interned above");
                    let nv = names.id(snap_names.name(v)).expect("interned above");
                    (nu, nv)
                })
                .collect();
            DirectedGraph::new(n, edges).expect("alignment preserves validity")
        })
        .collect();
    SnapshotSeries { names, graphs }
}
