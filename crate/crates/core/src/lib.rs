//! Decomposition of a directed graph into a maximum balanced (Eulerian)
//! subgraph and an acyclic remainder, the hierarchy ranks that remainder
//! induces, and analyses built on top of both.
//!
//! The pieces, bottom up:
//!
//! * [`graph`] / [`ingest`]: compact graph storage, edge-list parsing,
//!   multi-snapshot label alignment.
//! * [`scc`] / [`cycle`]: strongly connected components, cycle peeling
//!   and detection.
//! * [`baseline`]: the direct solvers; all edges start at weight -1,
//!   reversing a negative cycle flips its edges to +1, and when no
//!   negative cycle remains the +1 edges are a maximum balanced subgraph.
//! * [`greedy`](mod@greedy) / [`refine`](mod@refine): the two-phase
//!   pipeline; greedy cancels degree imbalances along shortest paths,
//!   refinement closes the small remaining gap, per strongly connected
//!   component.
//! * [`oracle`]: independent brute force for cross-checking.
//! * [`hierarchy`] / [`analysis`]: ranks, agony, rank distribution, gap
//!   accounting, mobility, direction recovery.

pub mod analysis;
pub mod baseline;
pub mod cycle;
pub mod decomp;
pub mod error;
pub mod graph;
pub mod greedy;
pub mod hierarchy;
pub mod ingest;
pub mod oracle;
pub mod refine;
pub mod scc;

pub use analysis::{
    build_gcal, gap_within_bound, kcycle_stats, mobility_matrix, predict_directions,
    theoretical_bound, DirectionCall, KCycleRecord, KCycleReport, MobilityMatrix,
    PredictionReport, SignedMultigraph,
};
pub use baseline::{dfseven, simple, simple_with_cap, ArcView, CycleSearch};
pub use decomp::{audit_no_negative_cycle, Decomposition, SolveStats};
pub use error::{ComponentDump, EulerError};
pub use graph::{DirectedGraph, EdgeSet, VertexId};
pub use greedy::{
    compute_labels, greedy, greedy_d, greedy_r, greedy_traced, l_subgraph, length_l_delete,
    length_l_reverse, move_cycles, GreedyOutcome, GreedyVariant, LabelState, LayeredSubgraph,
    WorkingView,
};
pub use hierarchy::{
    agony, assign_ranks, hierarchy_order, rank_distribution, strictly_higher,
    strictly_higher_pairs, top_fraction, RankHistogram, Ranking,
};
pub use ingest::{
    align_snapshots, parse_edge_list, parse_edge_list_path, write_edge_list, ParseStats,
    SnapshotSeries, VertexNameMap,
};
pub use oracle::{
    brute_force_max_euler, brute_force_max_euler_capped, brute_force_max_euler_unpruned,
    OracleResult,
};
pub use refine::{
    greedy_and_refine, init_dst, refine, ComponentMetrics, PipelineResult, RefineState,
};
pub use scc::{component_subgraph, scc_decompose, ComponentSubgraph, SccPartition};

#[cfg(test)]
pub(crate) mod testutil {
    use crate::graph::{DirectedGraph, VertexId};

    /// 14-vertex, 22-edge probe graph with three surplus and three deficit
    /// vertices, two nested cycle clusters, and a long tail; its maximum
    /// balanced subgraph has 16 edges. Vertex ids follow first appearance
    /// in the edge list; see [`probe_vertex`] for the original numbering.
    pub fn fig_fourteen() -> DirectedGraph {
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

    /// Maps the probe graph's original vertex numbering (1-based) to ids.
    pub fn probe_vertex(original: u32) -> VertexId {
        const MAP: [u32; 15] = [
            u32::MAX, // unused slot; numbering starts at 1
            0,
            1,
            3,
            2,
            4,
            5,
            12,
            6,
            13,
            7,
            8,
            9,
            10,
            11,
        ];
        VertexId(MAP[original as usize])
    }

    #[test]
    fn probe_graph_shape() {
        let g = fig_fourteen();
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(g.edge_count(), 22);
        let balance = g.degree_balance(&crate::graph::EdgeSet::full(g.edge_count()));
        let plus: Vec<u32> = (0..14).filter(|&v| balance[v as usize] > 0).collect();
        let minus: Vec<u32> = (0..14).filter(|&v| balance[v as usize] < 0).collect();
        assert_eq!(plus, vec![1, 2, 6]);
        assert_eq!(minus, vec![0, 3, 12]);
        assert_eq!(probe_vertex(2), VertexId(1));
        assert_eq!(probe_vertex(7), VertexId(12));
    }
}
