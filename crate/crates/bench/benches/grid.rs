use std::collections::BTreeMap;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sgc_core::adapt::{run_asgc, run_csc, AdaptiveConfig, ModelFunction};
use sgc_core::smooth::run_easgc;
use sgc_core::{benchmark, moments, CubicSpline};

fn construction(c: &mut Criterion) {
    let b = benchmark("line_singularity", &BTreeMap::new()).unwrap();
    let cfg = AdaptiveConfig::new(2).with_levels(4, 14);
    c.bench_function("csc line_singularity level 8", |bench| {
        bench.iter(|| run_csc(&ModelFunction::new(b.model.clone()), 2, 10).unwrap())
    });
    c.bench_function("asgc line_singularity level 12", |bench| {
        bench.iter(|| run_asgc(&ModelFunction::new(b.model.clone()), cfg.clone()).unwrap())
    });
    c.bench_function("easgc line_singularity level 12", |bench| {
        let cfg = cfg.clone().with_spline(9, 0.25);
        bench.iter(|| run_easgc(&ModelFunction::new(b.model.clone()), cfg.clone()).unwrap())
    });
}

fn queries(c: &mut Criterion) {
    let f = ModelFunction::from_fn(3, |x| (x[0] + 2.0 * x[1] - x[2]).sin());
    let model = run_csc(&f, 3, 11).unwrap().model;
    c.bench_function("interpolate 3-D level 8", |bench| {
        bench.iter(|| model.interpolate(black_box(&[0.31, 0.77, 0.52])).unwrap())
    });
    c.bench_function("moments 3-D level 8", |bench| bench.iter(|| moments(&model).unwrap()));
}

fn spline(c: &mut Criterion) {
    let x: Vec<f64> = (0..65).map(|i| i as f64 / 64.0).collect();
    let y: Vec<f64> = x.iter().map(|t| (6.0 * t).sin()).collect();
    c.bench_function("not-a-knot fit 65 knots", |bench| {
        bench.iter(|| CubicSpline::not_a_knot(black_box(&x), black_box(&y)).unwrap())
    });
    let s = CubicSpline::not_a_knot(&x, &y).unwrap();
    c.bench_function("spline eval", |bench| bench.iter(|| s.eval(black_box(0.4321)).unwrap()));
}

criterion_group!(benches, construction, queries, spline);
criterion_main!(benches);
