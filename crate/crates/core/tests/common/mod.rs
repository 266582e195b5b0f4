#![allow(dead_code)] // each integration test binary uses a subset

use qde_core::{
    log_checkpoints, AlgorithmConfig, BoxConstraint, ChannelModel, ExperimentConfig, Mode,
    NetworkGraph, NoiseModel, RegressorFamily, SensorModel, TrueSystem,
};

/// Six-sensor benchmark system on the C6 ring: theta = (1, -1, 1) inside
/// [0,2] x [-2,0] x [0,2], unit-variance Gaussian noise, zero thresholds.
pub fn benchmark_config(
    nu: f64,
    mode: Mode,
    horizon: u64,
    repetitions: u32,
    seed: u64,
) -> ExperimentConfig {
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
        algorithm: AlgorithmConfig::new(20.0, 70.0, nu, 0.1, param_box).unwrap(),
        channel: ChannelModel::new(0.1).unwrap(),
        repetitions,
        horizon,
        checkpoints: log_checkpoints(horizon),
        seed,
        mode,
        theta0: vec![0.5, -0.5, 0.5],
    }
}

/// Cyclic Jacobi eigenvalue iteration for small symmetric matrices. Kept
/// independent of the library's eigensolver so it can serve as an oracle.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..200 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut vals: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    vals
}
