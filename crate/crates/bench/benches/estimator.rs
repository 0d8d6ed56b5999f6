use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sbwave::aux_density::{sj_bandwidth, KernelDensityEstimate};
use sbwave::biased_estimator::{estimate_method, resolve_j1, Method};
use sbwave::experiments::{linspace, make_example, replication_rng, ExampleId};
use sbwave::wavelet::{load_filter, EvalPrecision, Evaluator};

fn wavelet_eval(c: &mut Criterion) {
    let mut group = c.benchmark_group("periodized_phi_all");
    for name in ["haar", "db4", "sym10"] {
        let ev = Evaluator::new(&load_filter(name).unwrap(), EvalPrecision::default());
        let mut out = vec![0.0; 1 << 8];
        group.bench_function(name, |b| b.iter(|| ev.periodized_phi_all(8, black_box(0.318_309_886), &mut out)));
    }
    group.finish();
}

fn estimate(c: &mut Criterion) {
    let ex = make_example(ExampleId::Ex1).unwrap();
    let mut group = c.benchmark_group("estimate_method");
    group.sample_size(10);
    for n in [250usize, 1000] {
        let sample = ex.sample_biased(n, &mut replication_rng(1, 0, n)).unwrap();
        for method in [Method::M2, Method::M3] {
            let j1 = resolve_j1(method.default_p(), n).unwrap();
            group.bench_with_input(BenchmarkId::new(method.to_string(), n), &sample, |b, s| {
                b.iter(|| estimate_method(black_box(s), ex.weight(), method, j1).unwrap())
            });
        }
    }
    group.finish();

    let sample = ex.sample_biased(1000, &mut replication_rng(1, 0, 1000)).unwrap();
    let est = estimate_method(&sample, ex.weight(), Method::M3, resolve_j1(0.95, 1000).unwrap()).unwrap();
    let grid = linspace(0.01, 0.99, 250);
    c.bench_function("eval_grid/250", |b| b.iter(|| est.eval_grid(black_box(&grid))));
}

fn aux_fit(c: &mut Criterion) {
    let ex = make_example(ExampleId::Ex2).unwrap();
    let mut group = c.benchmark_group("kde_sj");
    for n in [1000usize, 10_000] {
        let sample = ex.sample_biased(n, &mut replication_rng(2, 0, n)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &sample, |b, s| {
            b.iter(|| {
                let h = sj_bandwidth(black_box(s)).unwrap();
                KernelDensityEstimate::new(s, h).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, wavelet_eval, estimate, aux_fit);
criterion_main!(benches);
