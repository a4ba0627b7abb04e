//! Throughput of the data-parallel kernels. Built with the default
//! `parallel` feature this compares the full rayon pool against a
//! single-thread pool; built with `--no-default-features` it measures the
//! plain sequential fallback. Identical inputs produce identical results
//! in every configuration.

use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use stone_core::catalog::clique_cover;
use stone_core::embedding::{build_scale_family, embed, CoverBuilder, EmbeddingConfig};
use stone_core::moduli::DeltaOracle;
use stone_core::space::SpaceSpec;
use stone_core::FiniteMetricSpace;

fn space(n: usize, seed: u64) -> Arc<FiniteMetricSpace> {
    Arc::new(FiniteMetricSpace::generate(&SpaceSpec::RandomInteger { n, max: 20 }, seed).unwrap())
}

fn lebesgue_workload(s: &Arc<FiniteMetricSpace>) -> stone_core::Extended {
    let cover = clique_cover(s, 6.0).unwrap();
    cover.lebesgue_number().unwrap()
}

fn oracle_workload(s: &Arc<FiniteMetricSpace>) -> usize {
    let oracle = DeltaOracle::new(s).unwrap();
    let mut count = 0;
    for r in stone_core::moduli::default_grid(s) {
        if oracle
            .eval(stone_core::moduli::ModulusKind::Coarse, r)
            .unwrap()
            .is_infinite()
        {
            count += 1;
        }
    }
    count
}

fn embed_workload(s: &Arc<FiniteMetricSpace>) -> bool {
    let config = EmbeddingConfig::new(1.5, 0.25, 0.25);
    let family = build_scale_family(s, &config, CoverBuilder::Clique).unwrap();
    let (_, report) = embed(&family).unwrap();
    report.pass
}

#[cfg(feature = "parallel")]
fn bench_kernels(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let lebesgue_space = space(36, 1);
    let oracle_space = space(4, 2);
    let embed_space = space(40, 3);

    let mut group = c.benchmark_group("lebesgue_number/36pt");
    group.bench_function("parallel", |b| {
        b.iter(|| lebesgue_workload(&lebesgue_space))
    });
    group.bench_function("one_thread", |b| {
        b.iter(|| single.install(|| lebesgue_workload(&lebesgue_space)))
    });
    group.finish();

    let mut group = c.benchmark_group("delta_oracle/4pt");
    group.bench_function("parallel", |b| b.iter(|| oracle_workload(&oracle_space)));
    group.bench_function("one_thread", |b| {
        b.iter(|| single.install(|| oracle_workload(&oracle_space)))
    });
    group.finish();

    let mut group = c.benchmark_group("embed_certify/40pt");
    group.sample_size(20);
    group.bench_function("parallel", |b| b.iter(|| embed_workload(&embed_space)));
    group.bench_function("one_thread", |b| {
        b.iter(|| single.install(|| embed_workload(&embed_space)))
    });
    group.finish();
}

#[cfg(not(feature = "parallel"))]
fn bench_kernels(c: &mut Criterion) {
    let lebesgue_space = space(36, 1);
    let oracle_space = space(4, 2);
    let embed_space = space(40, 3);

    c.bench_function("lebesgue_number/36pt/sequential", |b| {
        b.iter(|| lebesgue_workload(&lebesgue_space))
    });
    c.bench_function("delta_oracle/4pt/sequential", |b| {
        b.iter(|| oracle_workload(&oracle_space))
    });
    let mut group = c.benchmark_group("embed_certify/40pt");
    group.sample_size(20);
    group.bench_function("sequential", |b| b.iter(|| embed_workload(&embed_space)));
    group.finish();
}

criterion_group!(benches, bench_kernels);
criterion_main!(benches);
