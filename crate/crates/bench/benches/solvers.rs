use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use robust_dsd::{algorithm2_sampling, greedy_peel, make_simulated_oracle, solve_exact, SamplingParams};
use robust_dsd_bench::planted;

fn exact(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_exact");
    for n in [200, 1000, 4000] {
        let inst = planted(n, 0.3);
        group.throughput(Throughput::Elements(inst.graph.edge_count() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve_exact(black_box(&inst.graph), black_box(&inst.w_true)).unwrap())
        });
    }
    group.finish();
}

fn peel(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_peel");
    for n in [1000, 10_000] {
        let inst = planted(n, 0.3);
        group.throughput(Throughput::Elements(inst.graph.edge_count() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| greedy_peel(black_box(&inst.graph), black_box(&inst.w_true)).unwrap())
        });
    }
    group.finish();
}

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("algorithm2");
    group.sample_size(10);
    let inst = planted(120, 0.3);
    for reduce in [false, true] {
        let params = SamplingParams {
            reduce,
            ..SamplingParams::new(0.1, 0.5)
        };
        group.bench_function(if reduce { "reduce" } else { "all_edges" }, |b| {
            b.iter(|| {
                let mut oracle = make_simulated_oracle(&inst, 1).unwrap();
                algorithm2_sampling(&inst.graph, &inst.space, &mut oracle, &params).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, exact, peel, sampling);
criterion_main!(benches);
