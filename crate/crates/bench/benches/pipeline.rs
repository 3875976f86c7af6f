use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use crqa_bench::{dyad, sinusoids};
use crqa_core::measures::{build_plot, compute_measures};
use crqa_core::optimize::optimize_param;
use crqa_core::{crqa, drpdfromts, oracle, CrqaParams, EmbeddingParams, OptimizeConfig, Rescale};

fn categorical_crqa(c: &mut Criterion) {
    let mut group = c.benchmark_group("crqa_categorical");
    group.sample_size(20);
    let params = CrqaParams::default();
    for size in [500, 1000, 2000, 3000] {
        let (a, b) = dyad(size);
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |bench, _| {
            bench.iter(|| crqa(black_box(&a), black_box(&b), &params, false).unwrap())
        });
    }
    group.finish();
}

fn continuous_crqa(c: &mut Criterion) {
    let mut group = c.benchmark_group("crqa_continuous");
    group.sample_size(20);
    let params = CrqaParams {
        embedding: EmbeddingParams {
            delay: 5,
            embed: 3,
            rescale: Rescale::MeanDistance,
            radius: 0.1,
            ..EmbeddingParams::default()
        },
        ..CrqaParams::default()
    };
    for size in [500, 1000, 2000] {
        let (a, b) = sinusoids(size);
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |bench, _| {
            bench.iter(|| crqa(black_box(&a), black_box(&b), &params, false).unwrap())
        });
    }
    group.finish();
}

fn stages(c: &mut Criterion) {
    let (a, b) = dyad(2000);
    let params = CrqaParams::default();
    let rp = build_plot(&a, &b, &params.embedding).unwrap();
    c.bench_function("build_plot_2000", |bench| {
        bench.iter(|| build_plot(black_box(&a), black_box(&b), &params.embedding).unwrap())
    });
    c.bench_function("line_measures_2000", |bench| {
        bench.iter(|| compute_measures(black_box(&rp), 2, 2).unwrap())
    });
    c.bench_function("profile_2000_ws100", |bench| {
        bench.iter(|| drpdfromts(black_box(&a), black_box(&b), 100, 0.0001).unwrap())
    });
}

fn against_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine_500");
    group.sample_size(10);
    let (a, b) = dyad(500);
    let params = CrqaParams::default();
    group.bench_function("optimized", |bench| bench.iter(|| crqa(&a, &b, &params, false).unwrap()));
    group.bench_function("oracle", |bench| bench.iter(|| oracle::crqa(&a, &b, &params).unwrap()));
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("optimize");
    group.sample_size(10);
    let (a, b) = sinusoids(400);
    let cfg = OptimizeConfig {
        max_embed: 8,
        ..OptimizeConfig::default()
    };
    group.bench_function("sinusoids_400", |bench| bench.iter(|| optimize_param(&a, &b, &cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, categorical_crqa, continuous_crqa, stages, against_oracle, optimizer);
criterion_main!(benches);
