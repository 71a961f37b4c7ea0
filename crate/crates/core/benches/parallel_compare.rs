//! Parallel-vs-sequential comparison for the hot loops: the exhaustive
//! translation-difference scan and corpus-wide BV/Besov evaluation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use padic_lp::counterexample::{build, sweep_params};
use padic_lp::harness::{
    bv_comparison_corpus, bv_comparison_corpus_serial, random_corpus, CorpusModel,
};
use padic_lp::lp::decompose;
use padic_lp::norms::{bv_seminorm_detailed, bv_seminorm_serial, BvMode};

fn bench_bv_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("bv_exact_scan");
    group.sample_size(10);
    for m in [3u32, 4, 5] {
        let f = build(&sweep_params(m).expect("valid sweep params")).expect("build");
        let level = f.level();
        group.bench_with_input(BenchmarkId::new("parallel", level), &f, |b, f| {
            b.iter(|| bv_seminorm_detailed(f, BvMode::Exact).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", level), &f, |b, f| {
            b.iter(|| bv_seminorm_serial(f, BvMode::Exact).unwrap())
        });
    }
    group.finish();
}

fn bench_corpus_comparison(c: &mut Criterion) {
    let corpus = random_corpus(8, 64, 42, CorpusModel::UniformSamples, true).expect("corpus");
    let mut group = c.benchmark_group("bv_besov_corpus");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| bv_comparison_corpus(&corpus).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| bv_comparison_corpus_serial(&corpus).unwrap())
    });
    group.finish();
}

fn bench_decompose(c: &mut Criterion) {
    let f = build(&sweep_params(6).expect("valid sweep params")).expect("build");
    c.bench_function("decompose_level_13", |b| b.iter(|| decompose(&f)));
}

criterion_group!(
    benches,
    bench_bv_scan,
    bench_corpus_comparison,
    bench_decompose
);
criterion_main!(benches);
