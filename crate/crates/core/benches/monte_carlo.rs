//! Parallel vs sequential Monte Carlo throughput on the six-sensor benchmark.
//!
//! Run with `cargo bench -p qde-core`. `run_monte_carlo` dispatches to rayon
//! when the default `parallel` feature is on; `run_monte_carlo_seq` is the
//! single-threaded reference. Both produce bit-identical summaries.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use qde_core::{
    log_checkpoints, run_monte_carlo, run_monte_carlo_seq, AlgorithmConfig, BoxConstraint,
    ChannelModel, ExperimentConfig, Mode, NetworkGraph, NoiseModel, RegressorFamily, SensorModel,
    TrueSystem,
};

fn benchmark_config(repetitions: u32, horizon: u64) -> ExperimentConfig {
    let param_box = BoxConstraint::new(vec![0.0, -2.0, 0.0], vec![2.0, 0.0, 2.0]).unwrap();
    let sensors = (1..=6)
        .map(|i| SensorModel {
            regressor: RegressorFamily::paper_example(i).unwrap(),
            threshold: 0.0,
            noise: NoiseModel::standard_gaussian(),
        })
        .collect();
    let system = TrueSystem::new(vec![1.0, -1.0, 1.0], param_box.clone(), sensors).unwrap();
    ExperimentConfig {
        system,
        graph: NetworkGraph::cycle(6),
        algorithm: AlgorithmConfig::new(20.0, 70.0, 0.1, 0.1, param_box).unwrap(),
        channel: ChannelModel::new(0.1).unwrap(),
        repetitions,
        horizon,
        checkpoints: log_checkpoints(horizon),
        seed: 7,
        mode: Mode::Cooperative,
        theta0: vec![0.5, -0.5, 0.5],
    }
}

fn bench_monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    for &(reps, horizon) in &[(16u32, 2_000u64), (32, 2_000)] {
        let cfg = benchmark_config(reps, horizon);
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("r{reps}_k{horizon}")),
            &cfg,
            |b, cfg| b.iter(|| black_box(run_monte_carlo(cfg).unwrap())),
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("r{reps}_k{horizon}")),
            &cfg,
            |b, cfg| b.iter(|| black_box(run_monte_carlo_seq(cfg).unwrap())),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_monte_carlo);
criterion_main!(benches);
