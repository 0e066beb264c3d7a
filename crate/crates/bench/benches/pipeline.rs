use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use cdetect::detect::{oracle_verify_all, verify_all, Options};
use cdetect::reachability::rg_observer;
use cdetect::{build_brg, build_rg, BrgOptions};
use cdetect_bench::{fixture_workloads, fork_join_family, random_samples};

fn graphs(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph construction");
    for w in fork_join_family(&[2, 4, 6, 8]) {
        group.bench_with_input(BenchmarkId::new("reachability", &w.name), &w, |b, w| {
            b.iter(|| build_rg(black_box(&w.net), 1_000_000).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("basis", &w.name), &w, |b, w| {
            b.iter(|| build_brg(black_box(&w.net), &w.crucial, BrgOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn verdicts(c: &mut Criterion) {
    let mut group = c.benchmark_group("verdicts");
    let no_rg = Options {
        check_assumptions: false,
        ..Default::default()
    };
    for w in fork_join_family(&[4, 8]).into_iter().chain(fixture_workloads()) {
        group.bench_with_input(BenchmarkId::new("basis route", &w.name), &w, |b, w| {
            b.iter(|| verify_all(black_box(&w.net), &w.crucial, &no_rg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oracle route", &w.name), &w, |b, w| {
            b.iter(|| {
                let rg = build_rg(black_box(&w.net), 1_000_000).unwrap();
                oracle_verify_all(&rg_observer(&w.net, &rg, &w.crucial, 1_000_000).unwrap())
            })
        });
    }
    group.finish();
}

fn corpus(c: &mut Criterion) {
    let samples = random_samples(50);
    c.bench_function("50 random nets, basis route with oracle check", |b| {
        let opts = Options {
            oracle: true,
            ..Default::default()
        };
        b.iter(|| {
            for s in &samples {
                black_box(verify_all(&s.net, &s.crucial, &opts).unwrap());
            }
        })
    });
}

criterion_group!(benches, graphs, verdicts, corpus);
criterion_main!(benches);
