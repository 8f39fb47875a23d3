use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lieflag_bench::{g1_randers, h3r_matsumoto, heisenberg_randers};
use lieflag_core::flag_curvature::{flag_curvature_generic, TensorBackend};
use lieflag_core::riemannian::sectional_curvature;
use lieflag_core::{classify, compare_engines, scan, Engine, RESIDUAL_TOL};

fn sectional(c: &mut Criterion) {
    let mut group = c.benchmark_group("sectional_curvature");
    for n in [1, 3, 6] {
        let fx = heisenberg_randers(n);
        let flags = fx.flags(32);
        group.bench_with_input(BenchmarkId::from_parameter(fx.algebra.dim()), &flags, |b, flags| {
            b.iter(|| {
                flags
                    .iter()
                    .map(|f| sectional_curvature(&fx.algebra, &fx.metric, f.y(), f.v()).unwrap())
                    .sum::<f64>()
            })
        });
    }
    group.finish();
}

fn engines(c: &mut Criterion) {
    let fx = h3r_matsumoto();
    let m = fx.finsler();
    let flags = fx.flags(32);
    c.bench_function("generic_analytic/h3+r", |b| {
        b.iter(|| flags.iter().map(|f| flag_curvature_generic(&m, f, TensorBackend::Analytic).unwrap()).sum::<f64>())
    });
    c.bench_function("generic_fd/h3+r", |b| {
        b.iter(|| {
            flags
                .iter()
                .map(|f| flag_curvature_generic(&m, f, TensorBackend::FiniteDifference(1e-4)).unwrap())
                .sum::<f64>()
        })
    });
    c.bench_function("matsumoto_closed/h3+r", |b| {
        b.iter(|| flags.iter().map(|f| Engine::MatsumotoBerwald.evaluate(&m, f).unwrap()).sum::<f64>())
    });

    let g1 = g1_randers(4);
    let mg = g1.finsler();
    let gflags = g1.flags(32);
    c.bench_function("compare_engines/g1(4)", |b| {
        b.iter(|| gflags.iter().map(|f| compare_engines(&mg, f).values.len()).sum::<usize>())
    });
}

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for n in [1, 3, 6] {
        let fx = heisenberg_randers(n);
        let m = fx.finsler();
        group.bench_function(BenchmarkId::from_parameter(fx.algebra.dim()), |b| {
            b.iter(|| classify(black_box(&m), RESIDUAL_TOL).unwrap())
        });
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let fx = h3r_matsumoto();
    let m = fx.finsler();
    let mut group = c.benchmark_group("scan");
    group.sample_size(10);
    group.bench_function("h3+r matsumoto 10k", |b| b.iter(|| scan(&m, 10_000, black_box(1)).unwrap()));
    group.finish();
}

criterion_group!(benches, sectional, engines, classification, spectrum);
criterion_main!(benches);
