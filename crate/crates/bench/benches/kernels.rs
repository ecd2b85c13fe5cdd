use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use vaisman_bench::gh_fixture;
use vaisman_core::biholo::{check_j_compatibility, Family, FamilyChart, FiniteDifference};
use vaisman_core::catalog::make_u2;
use vaisman_core::hermitian::{classify_hermitian, nijenhuis};
use vaisman_core::search::{solve_complex_structures, SearchConfig};

fn bench_nijenhuis(c: &mut Criterion) {
    let mut group = c.benchmark_group("nijenhuis");
    for m in [1, 2, 3] {
        let f = gh_fixture(m);
        group.bench_with_input(BenchmarkId::new("exact", m), &f, |b, f| b.iter(|| nijenhuis(&f.g, &f.j).unwrap()));
        let (g, j) = (f.g.to_f64(), f.j.to_f64());
        group.bench_with_input(BenchmarkId::new("f64", m), &m, |b, _| b.iter(|| nijenhuis(&g, &j).unwrap()));
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_hermitian");
    group.sample_size(20);
    for m in [1, 2] {
        let f = gh_fixture(m);
        group.bench_with_input(BenchmarkId::from_parameter(m), &f, |b, f| {
            b.iter(|| classify_hermitian(&f.g, &f.j, &f.metric).unwrap())
        });
    }
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let g = make_u2().to_f64();
    let cfg = SearchConfig { seeds: 20, ..SearchConfig::default() };
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("u2_20_seeds", |b| b.iter(|| solve_complex_structures(black_box(&g), &cfg).unwrap()));
    group.finish();
}

fn bench_pushforward(c: &mut Criterion) {
    let delta = Complex64::new(2.0, -1.0);
    let mut group = c.benchmark_group("pushforward");
    group.sample_size(20);
    for family in [Family::Sl2, Family::Su2, Family::Gh { eps: vec![1, -1] }] {
        let chart = FamilyChart::new(family.clone(), delta).unwrap();
        group.bench_function(family.name(), |b| {
            b.iter(|| check_j_compatibility(&chart, 10, 42, FiniteDifference::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, bench_nijenhuis, bench_classify, bench_search, bench_pushforward);
criterion_main!(kernels);
