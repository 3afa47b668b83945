use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kak::harness::{parse_filter, sweep, SweepConfig};

fn config(max_n: usize, parallel: bool) -> SweepConfig {
    SweepConfig {
        sizes: (1..=max_n).collect(),
        trials: 10,
        parallel,
        filter: Some(parse_filter("F1,F4,F7,F9,F18").expect("valid filter")),
        ..SweepConfig::default()
    }
}

fn sequential_vs_parallel(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for max_n in [4, 8] {
        for (name, parallel) in [("sequential", false), ("parallel", true)] {
            let cfg = config(max_n, parallel);
            group.bench_with_input(BenchmarkId::new(name, max_n), &cfg, |b, cfg| {
                b.iter(|| black_box(sweep(cfg).expect("sweep runs")))
            });
        }
    }
    group.finish();
}

fn single_cell(c: &mut Criterion) {
    let mut cfg = config(8, false);
    cfg.filter = Some(parse_filter("F4.C").expect("valid filter"));
    cfg.trials = 50;
    c.bench_function("sweep F4.C n<=8", |b| b.iter(|| black_box(sweep(&cfg).expect("sweep runs"))));
}

criterion_group!(benches, sequential_vs_parallel, single_cell);
criterion_main!(benches);
