use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use eulerdag::baseline::{dfseven, simple};
use eulerdag::greedy::GreedyVariant;
use eulerdag::refine::greedy_and_refine;
use eulerdag_bench::bench_graph;

fn solver_comparison(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    for &(n, m) in &[(200u32, 1_000usize), (1_000, 5_000), (4_000, 20_000)] {
        let g = bench_graph(n, m, 0.15, 42);
        let label = format!("n{}_m{}", g.vertex_count(), g.edge_count());
        group.bench_with_input(BenchmarkId::new("dfseven", &label), &g, |b, g| {
            b.iter(|| dfseven(g).0.euler.len())
        });
        group.bench_with_input(BenchmarkId::new("gr-d", &label), &g, |b, g| {
            b.iter(|| {
                greedy_and_refine(g, GreedyVariant::Delete)
                    .unwrap()
                    .decomposition
                    .euler
                    .len()
            })
        });
        group.bench_with_input(BenchmarkId::new("gr-r", &label), &g, |b, g| {
            b.iter(|| {
                greedy_and_refine(g, GreedyVariant::Reverse)
                    .unwrap()
                    .decomposition
                    .euler
                    .len()
            })
        });
        if g.edge_count() <= 1_000 {
            group.bench_with_input(BenchmarkId::new("simple", &label), &g, |b, g| {
                b.iter(|| simple(g).unwrap().0.euler.len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, solver_comparison);
criterion_main!(benches);
