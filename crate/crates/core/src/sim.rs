//! Experiment orchestration: single runs, Monte Carlo aggregation, the
//! communication bit-rate metric and log-log slope fitting.
//!
//! Every run derives its randomness from `(master seed, run index, stream
//! role, entity, step)`, so runs are independent tasks that can execute in
//! any order, sequentially or on a rayon pool, and aggregate to bit-identical
//! summaries either way.

use crate::error::{ConfigError, FitError, UnrecordedCheckpoint};
use crate::estimator::{fusion_update, noncooperative_update, AlgorithmConfig, SensorState};
use crate::graph::NetworkGraph;
use crate::math::laplace_quantile;
use crate::protocol::{
    encode, reconstruct, should_trigger, transmit, trigger_threshold, ChannelModel,
};
use crate::rng::{Stream, StreamRole};
use crate::sensing::{coding_index, TrueSystem};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cooperative,
    Noncooperative,
}

/// A fully specified experiment: the plant, the network, the estimator
/// settings, the channel and the Monte Carlo plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: TrueSystem,
    pub graph: NetworkGraph,
    pub algorithm: AlgorithmConfig,
    pub channel: ChannelModel,
    pub repetitions: u32,
    pub horizon: u64,
    /// Sorted steps at which errors and bit counters are recorded.
    pub checkpoints: Vec<u64>,
    pub seed: u64,
    pub mode: Mode,
    /// Initial estimate shared by every sensor.
    pub theta0: Vec<f64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.repetitions == 0 {
            return Err(ConfigError::new("experiment.repetitions", "must be at least 1"));
        }
        if self.horizon == 0 {
            return Err(ConfigError::new("experiment.horizon", "must be at least 1"));
        }
        if self.theta0.len() != self.system.dim() {
            return Err(ConfigError::new(
                "experiment.theta0",
                format!(
                    "has {} entries, parameter dimension is {}",
                    self.theta0.len(),
                    self.system.dim()
                ),
            ));
        }
        if self.graph.node_count() != self.system.sensor_count() {
            return Err(ConfigError::new(
                "graph.m",
                format!(
                    "graph has {} nodes but the system has {} sensors",
                    self.graph.node_count(),
                    self.system.sensor_count()
                ),
            ));
        }
        if self.algorithm.param_box != *self.system.param_box() {
            return Err(ConfigError::new(
                "algorithm.box",
                "projection box differs from the system's parameter box",
            ));
        }
        if self.mode == Mode::Cooperative && !self.graph.is_connected() {
            return Err(ConfigError::new(
                "graph.edges",
                "cooperative mode requires a connected graph",
            ));
        }
        let mut prev = 0u64;
        for &c in &self.checkpoints {
            if c < 1 || c > self.horizon {
                return Err(ConfigError::new(
                    "experiment.checkpoints",
                    format!("checkpoint {c} outside [1, {}]", self.horizon),
                ));
            }
            if c <= prev {
                return Err(ConfigError::new(
                    "experiment.checkpoints",
                    "checkpoints must be strictly increasing",
                ));
            }
            prev = c;
        }
        Ok(())
    }
}

/// Default checkpoint schedule: every j * 10^d up to the horizon, plus the
/// horizon itself.
pub fn log_checkpoints(horizon: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut scale = 1u64;
    'outer: loop {
        for j in 1..=9u64 {
            let k = match j.checked_mul(scale) {
                Some(k) => k,
                None => break 'outer,
            };
            if k > horizon {
                break 'outer;
            }
            out.push(k);
        }
        scale = match scale.checked_mul(10) {
            Some(s) => s,
            None => break,
        };
    }
    if out.last() != Some(&horizon) {
        out.push(horizon);
    }
    out
}

/// Everything recorded about one Monte Carlo run: per-checkpoint squared
/// errors per sensor and cumulative bit counters per directed edge.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub checkpoints: Vec<u64>,
    /// `[checkpoint][sensor]` squared estimation error.
    pub sq_errors: Vec<Vec<f64>>,
    /// `[checkpoint][edge]` cumulative bits sent, counted at the sender.
    pub bits_sent: Vec<Vec<u64>>,
    /// `[checkpoint][edge]` cumulative bits actually delivered.
    pub bits_delivered: Vec<Vec<u64>>,
}

/// Executes one run. Fails on an invalid configuration; see
/// [`run_single_unchecked`] for the pre-validated entry point.
pub fn run_single(cfg: &ExperimentConfig, run_index: u32) -> Result<RunTrace, ConfigError> {
    cfg.validate()?;
    Ok(run_single_unchecked(cfg, run_index))
}

/// One synchronous run over `cfg.horizon` steps. Within each step: all
/// sensors dither/encode/trigger, all transmissions resolve, all sensors
/// measure, then all apply the fusion update against same-step packets.
pub fn run_single_unchecked(cfg: &ExperimentConfig, run_index: u32) -> RunTrace {
    let n = cfg.system.dim();
    let m = cfg.system.sensor_count();
    let run = run_index as u64;
    let cooperative = cfg.mode == Mode::Cooperative;

    let edges = cfg.graph.directed_edges();
    let dither: Vec<Stream> =
        (0..m).map(|i| Stream::new(cfg.seed, run, StreamRole::Dither, i as u64)).collect();
    let noise: Vec<Stream> =
        (0..m).map(|i| Stream::new(cfg.seed, run, StreamRole::Noise, i as u64)).collect();
    let chan: Vec<Stream> = (0..edges.len())
        .map(|e| Stream::new(cfg.seed, run, StreamRole::Channel, e as u64))
        .collect();

    let mut states: Vec<SensorState> =
        (0..m).map(|_| SensorState::new(cfg.theta0.clone())).collect();
    let mut phis = vec![vec![0.0f64; n]; m];
    let mut psi = vec![0.0f64; n];
    let mut z = vec![0i8; m];
    let mut triggered = vec![false; m];
    let mut incoming: Vec<Vec<(f64, f64)>> =
        (0..m).map(|i| Vec::with_capacity(cfg.graph.degree(i))).collect();
    let mut sent_cum = vec![0u64; edges.len()];
    let mut delivered_cum = vec![0u64; edges.len()];

    let mut trace = RunTrace {
        checkpoints: cfg.checkpoints.clone(),
        sq_errors: Vec::with_capacity(cfg.checkpoints.len()),
        bits_sent: Vec::with_capacity(cfg.checkpoints.len()),
        bits_delivered: Vec::with_capacity(cfg.checkpoints.len()),
    };
    let mut next_ckpt = 0usize;

    for k in 1..=cfg.horizon {
        for (i, phi) in phis.iter_mut().enumerate() {
            cfg.system.sensor(i).regressor.write_at(k, phi);
        }

        if cooperative {
            psi.fill(0.0);
            psi[coding_index(k, n)] = 1.0;
            let c_hat = trigger_threshold(k, cfg.algorithm.nu);

            for i in 0..m {
                let omega = laplace_quantile(dither[i].uniform(k));
                z[i] = encode(&states[i].theta_hat, &psi, omega);
                triggered[i] = should_trigger(&states[i].theta_hat, &psi, omega, c_hat);
            }

            for buf in &mut incoming {
                buf.clear();
            }
            for (e, &(snd, rcv)) in edges.iter().enumerate() {
                // One erasure draw per directed edge per step, triggered or
                // not, to keep traces aligned across trigger settings.
                let u = chan[e].uniform(k);
                let pkt = transmit(&cfg.channel, z[snd], triggered[snd], u);
                if triggered[snd] {
                    sent_cum[e] += 1;
                    if pkt.gamma {
                        delivered_cum[e] += 1;
                    }
                }
                let s_hat = reconstruct(pkt, cfg.algorithm.p_assumed);
                incoming[rcv].push((cfg.graph.weight(rcv, snd), s_hat));
            }

            for i in 0..m {
                let s = cfg.system.measure_with(&phis[i], i, noise[i].uniform(k));
                let threshold = cfg.system.sensor(i).threshold;
                fusion_update(
                    &mut states[i],
                    s,
                    &incoming[i],
                    &phis[i],
                    &psi,
                    &cfg.algorithm,
                    &cfg.system.sensor(i).noise,
                    threshold,
                    c_hat,
                );
            }
        } else {
            for i in 0..m {
                let s = cfg.system.measure_with(&phis[i], i, noise[i].uniform(k));
                let threshold = cfg.system.sensor(i).threshold;
                noncooperative_update(
                    &mut states[i],
                    s,
                    &phis[i],
                    &cfg.algorithm,
                    &cfg.system.sensor(i).noise,
                    threshold,
                );
            }
        }

        if next_ckpt < cfg.checkpoints.len() && cfg.checkpoints[next_ckpt] == k {
            trace
                .sq_errors
                .push(states.iter().map(|st| st.squared_error(cfg.system.theta())).collect());
            trace.bits_sent.push(sent_cum.clone());
            trace.bits_delivered.push(delivered_cum.clone());
            next_ckpt += 1;
        }
    }
    trace
}

/// Aggregated Monte Carlo metrics: the MSE trajectory and the global average
/// communication bit-rate.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSummary {
    pub checkpoints: Vec<u64>,
    /// Mean squared estimation error over runs and sensors.
    pub mse: Vec<f64>,
    /// Standard error of the per-run sensor-averaged squared error.
    pub mse_stderr: Vec<f64>,
    /// Cumulative bits sent divided by k times the total degree, in [0, 1].
    pub kappa: Vec<f64>,
    /// Mean (over runs) cumulative bits sent across all directed edges.
    pub bits_sent_mean: Vec<f64>,
    pub bits_delivered_mean: Vec<f64>,
    pub repetitions: u32,
    pub total_degree: usize,
}

impl MetricsSummary {
    fn index_of(&self, k: u64) -> Result<usize, UnrecordedCheckpoint> {
        self.checkpoints.binary_search(&k).map_err(|_| UnrecordedCheckpoint(k))
    }

    pub fn mse_at(&self, k: u64) -> Result<f64, UnrecordedCheckpoint> {
        Ok(self.mse[self.index_of(k)?])
    }

    pub fn mse_stderr_at(&self, k: u64) -> Result<f64, UnrecordedCheckpoint> {
        Ok(self.mse_stderr[self.index_of(k)?])
    }

    pub fn kappa_at(&self, k: u64) -> Result<f64, UnrecordedCheckpoint> {
        Ok(self.kappa[self.index_of(k)?])
    }
}

/// Global average communication bit-rate at a recorded checkpoint.
pub fn comm_bit_rate(summary: &MetricsSummary, k: u64) -> Result<f64, UnrecordedCheckpoint> {
    summary.kappa_at(k)
}

/// Deterministic reduction of run traces, in run-index order.
pub fn aggregate(cfg: &ExperimentConfig, traces: &[RunTrace]) -> MetricsSummary {
    let r = traces.len();
    assert!(r > 0, "aggregate needs at least one trace");
    let m = cfg.system.sensor_count();
    let ckpts = &cfg.checkpoints;
    let total_degree = cfg.graph.total_degree();

    let mut mse = vec![0.0; ckpts.len()];
    let mut mse_stderr = vec![0.0; ckpts.len()];
    let mut kappa = vec![0.0; ckpts.len()];
    let mut sent_mean = vec![0.0; ckpts.len()];
    let mut delivered_mean = vec![0.0; ckpts.len()];

    for (c, &k) in ckpts.iter().enumerate() {
        let mut run_means = Vec::with_capacity(r);
        let mut sent_total = 0u64;
        let mut delivered_total = 0u64;
        for trace in traces {
            let per_run: f64 = trace.sq_errors[c].iter().sum::<f64>() / m as f64;
            run_means.push(per_run);
            sent_total += trace.bits_sent[c].iter().sum::<u64>();
            delivered_total += trace.bits_delivered[c].iter().sum::<u64>();
        }
        let mean = run_means.iter().sum::<f64>() / r as f64;
        mse[c] = mean;
        if r > 1 {
            let var =
                run_means.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1) as f64;
            mse_stderr[c] = (var / r as f64).sqrt();
        }
        sent_mean[c] = sent_total as f64 / r as f64;
        delivered_mean[c] = delivered_total as f64 / r as f64;
        if total_degree > 0 {
            kappa[c] = sent_total as f64 / (r as f64 * k as f64 * total_degree as f64);
        }
    }

    MetricsSummary {
        checkpoints: ckpts.clone(),
        mse,
        mse_stderr,
        kappa,
        bits_sent_mean: sent_mean,
        bits_delivered_mean: delivered_mean,
        repetitions: r as u32,
        total_degree,
    }
}

/// Runs all repetitions and aggregates. Uses the rayon pool when the
/// `parallel` feature is enabled; the result is identical either way.
pub fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<MetricsSummary, ConfigError> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    let traces: Vec<RunTrace> =
        (0..cfg.repetitions).into_par_iter().map(|r| run_single_unchecked(cfg, r)).collect();
    #[cfg(not(feature = "parallel"))]
    let traces: Vec<RunTrace> =
        (0..cfg.repetitions).map(|r| run_single_unchecked(cfg, r)).collect();
    Ok(aggregate(cfg, &traces))
}

/// Sequential reference path, always available; the criterion bench compares
/// it against [`run_monte_carlo`].
pub fn run_monte_carlo_seq(cfg: &ExperimentConfig) -> Result<MetricsSummary, ConfigError> {
    cfg.validate()?;
    let traces: Vec<RunTrace> =
        (0..cfg.repetitions).map(|r| run_single_unchecked(cfg, r)).collect();
    Ok(aggregate(cfg, &traces))
}

/// Ordinary least squares of ln(value) against ln(k) over checkpoints in
/// `[k_min, k_max]`. Returns the slope and its 95% confidence half-width.
pub fn fit_loglog_slope(
    ks: &[u64],
    values: &[f64],
    k_min: u64,
    k_max: u64,
) -> Result<(f64, f64), FitError> {
    assert_eq!(ks.len(), values.len(), "fit_loglog_slope: length mismatch");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&k, &v) in ks.iter().zip(values) {
        if k < k_min || k > k_max {
            continue;
        }
        if !(v > 0.0) {
            return Err(FitError::NonPositiveValue { k, value: v });
        }
        xs.push((k as f64).ln());
        ys.push(v.ln());
    }
    let n = xs.len();
    if n < 5 {
        return Err(FitError::TooFewPoints { required: 5, found: n, k_min, k_max });
    }

    let nf = n as f64;
    let x_mean = xs.iter().sum::<f64>() / nf;
    let y_mean = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let resid = y - (intercept + slope * x);
            resid * resid
        })
        .sum();
    let dof = (n - 2) as f64;
    let slope_se = (ssr / dof / sxx).sqrt();
    let half_width = student_t_975(dof) * slope_se;
    Ok((slope, half_width))
}

fn student_t_975(dof: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, StudentsT};
    StudentsT::new(0.0, 1.0, dof)
        .expect("valid Student-t dof")
        .inverse_cdf(0.975)
}
