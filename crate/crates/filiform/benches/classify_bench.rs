//! Throughput comparison of the parallel and sequential batch classifiers.
//!
//! Run with `cargo bench -p filiform`.  The `parallel` group exercises the
//! rayon path (only meaningful when the default `parallel` feature is on);
//! `sequential` always measures the single-threaded reference path.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use filiform::batch::{classify_batch, classify_batch_seq};
use filiform::sample::{random_tleib, rng_from_seed};
use filiform::scalar::ZeroTest;
use filiform::TLeibParams;

fn batch(dim: usize, len: usize) -> Vec<TLeibParams> {
    let mut rng = rng_from_seed(0xF111F02A);
    (0..len).map(|_| random_tleib(dim, &mut rng)).collect()
}

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_batch");
    for dim in [5usize, 6] {
        for len in [256usize, 2048] {
            let points = batch(dim, len);
            group.throughput(Throughput::Elements(len as u64));
            group.bench_with_input(
                BenchmarkId::new(format!("parallel/dim{dim}"), len),
                &points,
                |b, pts| b.iter(|| classify_batch(pts, ZeroTest::DEFAULT_TOL)),
            );
            group.bench_with_input(
                BenchmarkId::new(format!("sequential/dim{dim}"), len),
                &points,
                |b, pts| b.iter(|| classify_batch_seq(pts, ZeroTest::DEFAULT_TOL)),
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_classify);
criterion_main!(benches);
