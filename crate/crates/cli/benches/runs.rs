//! Sequential vs rayon-parallel execution of the runs x shots protocol.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qobs::config::{ExperimentConfig, Method, StateSource, VqeSource};
use qobs::run_experiment;
use qobs_core::parallel::Execution;

fn amplitude_config(operator: &str, amps: &[f64], method: Method) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(operator, StateSource::Amplitudes(amps.to_vec()));
    cfg.method = method;
    cfg.runs = 100;
    cfg.shots = 100_000;
    cfg
}

fn bench_runs(c: &mut Criterion) {
    let q4_amps = [0.25, 0.85, -0.2, 0.4];
    let mut vqe = ExperimentConfig::new("yy_pos", StateSource::Vqe(VqeSource::new("yy_pos")));
    vqe.runs = 16;
    vqe.shots = 10_000;

    let cases = [
        (
            "basis2_htest",
            amplitude_config("q2_gc", &[0.2759, 0.9611], Method::Htest),
        ),
        (
            "basis2_lcu_dswap",
            amplitude_config("q2_gc", &[0.2759, 0.9611], Method::LcuDswap),
        ),
        ("basis4_lcu_swap", amplitude_config("q4_gc", &q4_amps, Method::LcuSwap)),
        ("yy_vqe_htest", vqe),
    ];

    let mut group = c.benchmark_group("run_experiment");
    group.sample_size(10);
    for (name, cfg) in &cases {
        for (label, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            group.bench_with_input(BenchmarkId::new(*name, label), cfg, |b, cfg| {
                b.iter(|| run_experiment(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_runs);
criterion_main!(benches);
