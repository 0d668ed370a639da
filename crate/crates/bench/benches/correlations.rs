use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dicke_bench::{geometry, spread_detectors, theta_grid};
use dicke_core::functional::build_functional;
use dicke_core::{
    extract_gm, g_m_closed_coincident, g_m_exact, g_m_pathsum, scan_curve, Method, StateVector,
};

fn exact_vs_pathsum(c: &mut Criterion) {
    let mut group = c.benchmark_group("g_m");
    for n in [4usize, 6, 8] {
        let g = geometry(n);
        let d = spread_detectors(n);
        let phi = StateVector::fully_excited(n).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", n), &n, |b, _| {
            b.iter(|| g_m_exact(black_box(&g), black_box(&d), &phi).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pathsum", n), &n, |b, _| {
            b.iter(|| g_m_pathsum(black_box(&g), black_box(&d)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("closed", n), &n, |b, _| {
            b.iter(|| g_m_closed_coincident(n, n, black_box(0.37)).unwrap())
        });
    }
    group.finish();
}

fn functional(c: &mut Criterion) {
    let mut group = c.benchmark_group("functional");
    for n in [4usize, 8] {
        let g = geometry(n);
        group.bench_with_input(BenchmarkId::new("build_k2", n), &n, |b, _| {
            b.iter(|| build_functional(black_box(&g), &[0.0, 0.3]).unwrap())
        });
        let poly = build_functional(&g, &[0.0, 0.3]).unwrap();
        group.bench_with_input(BenchmarkId::new("extract", n), &n, |b, _| {
            b.iter(|| extract_gm(black_box(&poly), &[n - 1, 1]).unwrap())
        });
    }
    group.finish();
}

fn exact_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_engine");
    group.sample_size(20);
    for n in [10usize, 14, 18] {
        let g = geometry(n);
        let d = spread_detectors(3);
        let phi = StateVector::fully_excited(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| g_m_exact(&g, black_box(&d), &phi).unwrap())
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let g = geometry(8);
    let grid = theta_grid(181);
    let mut group = c.benchmark_group("scan_181");
    for method in [Method::Closed, Method::Exact, Method::Functional] {
        group.bench_function(method.as_str(), |b| {
            b.iter(|| scan_curve(&g, 8, 0.0, black_box(&grid), method).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exact_vs_pathsum, functional, exact_scaling, scans);
criterion_main!(benches);
