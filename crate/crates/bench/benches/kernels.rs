use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use vaismanlab::brieskorn;
use vaismanlab::curvature::PointCurvature;
use vaismanlab::ghlimit;
use vaismanlab::models::HermitianModel;
use vaismanlab_bench::fixture_points;

fn point_curvature(c: &mut Criterion) {
    let mut g = c.benchmark_group("point_curvature");
    for spec in ["hopf:2", "hopf:3", "lens:2:3"] {
        let m = HermitianModel::parse(spec).unwrap();
        let p = fixture_points(&m, 1).remove(0);
        g.bench_with_input(BenchmarkId::from_parameter(spec), &p, |b, p| {
            b.iter(|| PointCurvature::compute(&m, black_box(p)))
        });
    }
    g.finish();
}

fn hodge_star(c: &mut Criterion) {
    let mut g = c.benchmark_group("hodge_star");
    for n in [2usize, 3, 4] {
        let m = HermitianModel::hopf(n).unwrap();
        let p = fixture_points(&m, 1).remove(0);
        let metric = m.metric_at(&p);
        let omega = metric.fundamental_form().power(n - 1);
        g.bench_with_input(BenchmarkId::from_parameter(n), &omega, |b, f| {
            b.iter(|| metric.hodge_star(black_box(f)))
        });
    }
    g.finish();
}

fn brieskorn_scan(c: &mut Criterion) {
    c.bench_function("brieskorn_scan_n5_max12", |b| {
        b.iter(|| brieskorn::scan(black_box(5), 12).unwrap())
    });
}

fn graph_distance(c: &mut Criterion) {
    let m = HermitianModel::hopf(2).unwrap();
    let cloud = ghlimit::sample_cloud(&m, std::f64::consts::E, 1000, 10, 3).unwrap();
    c.bench_function("graph_distance_hopf2_1000", |b| {
        b.iter(|| ghlimit::graph_distance(&cloud, black_box(0.3)).unwrap())
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(20);
    targets = point_curvature, hodge_star, brieskorn_scan, graph_distance
}
criterion_main!(kernels);
