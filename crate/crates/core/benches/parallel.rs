//! Parallel hot loops on a single-thread pool against the default pool.
//! Build with `--no-default-features` to time the plain sequential loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::{ThreadPool, ThreadPoolBuilder};

use codeword_lab::codes::max_code_size;
use codeword_lab::codewords::check_prop4;
use codeword_lab::{CodeParams, DescriptionSystem, Level, SearchMethod, Word};

fn pools() -> Vec<(String, ThreadPool)> {
    vec![
        ("one_thread".into(), ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default_pool".into(), ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn hot_loops(c: &mut Criterion) {
    let mut g = c.benchmark_group("parallel");
    g.sample_size(10);
    for (label, pool) in pools() {
        g.bench_function(BenchmarkId::new("ball_profile_n10_e2", &label), |b| {
            b.iter(|| pool.install(|| DescriptionSystem::default().ball_profile(Level::Zero, 10, 2).unwrap()))
        });
        g.bench_function(BenchmarkId::new("prop4_n7_e1_lambda6", &label), |b| {
            b.iter(|| pool.install(|| check_prop4(&DescriptionSystem::default(), 7, 1, 6).unwrap()))
        });
        let params = CodeParams::new(4, 1, 1).unwrap();
        g.bench_function(BenchmarkId::new("exhaustive_n4_e1_lambda1", &label), |b| {
            b.iter(|| pool.install(|| max_code_size(params, SearchMethod::Exhaustive).unwrap()))
        });
        let x: Word = "101".parse().unwrap();
        g.bench_function(BenchmarkId::new("enumerate_k1_101", &label), |b| {
            b.iter(|| {
                pool.install(|| DescriptionSystem::default().complexity_by_enumeration(Level::One, &x, &Word::empty(), 12).unwrap())
            })
        });
    }
    g.finish();
}

criterion_group!(benches, hot_loops);
criterion_main!(benches);
