//! The fusion update, its non-cooperative baseline, and the constants that
//! govern the convergence-rate condition.

use crate::error::{ConfigError, GraphError};
use crate::graph::NetworkGraph;
use crate::math::{laplace_pdf, BoxConstraint, NoiseModel};
use crate::protocol::{f_hat, g_hat};
use crate::sensing::TrueSystem;
use nalgebra::DMatrix;
use thiserror::Error;

/// Step coefficients and trigger exponent of the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmConfig {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub p_assumed: f64,
    pub param_box: BoxConstraint,
}

impl AlgorithmConfig {
    pub fn new(
        alpha: f64,
        beta: f64,
        nu: f64,
        p_assumed: f64,
        param_box: BoxConstraint,
    ) -> Result<Self, ConfigError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(ConfigError::new("algorithm.alpha", format!("must be > 0, got {alpha}")));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(ConfigError::new("algorithm.beta", format!("must be > 0, got {beta}")));
        }
        if !(0.0..1.0).contains(&nu) {
            return Err(ConfigError::new("algorithm.nu", format!("must be in [0, 1), got {nu}")));
        }
        if !(0.0..1.0).contains(&p_assumed) {
            return Err(ConfigError::new(
                "algorithm.p_assumed",
                format!("must be in [0, 1), got {p_assumed}"),
            ));
        }
        Ok(AlgorithmConfig { alpha, beta, nu, p_assumed, param_box })
    }
}

/// Estimate of one sensor together with the number of completed updates.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorState {
    pub theta_hat: Vec<f64>,
    pub k: u64,
}

impl SensorState {
    pub fn new(theta_hat: Vec<f64>) -> Self {
        SensorState { theta_hat, k: 0 }
    }

    pub fn squared_error(&self, theta: &[f64]) -> f64 {
        self.theta_hat
            .iter()
            .zip(theta)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

/// One synchronous fusion step. Applies
///
/// theta_hat <- project( theta_hat
///     + (beta / k) * phi * (f_hat - s)
///     + (alpha / k^(1 - nu)) * sum_j a_ij * psi * (s_hat_ij - g_hat) )
///
/// with k = `state.k + 1`, then advances the counter. `neighbor_recons`
/// holds `(a_ij, s_hat_ij)` pairs for the neighbors of this sensor; both
/// compensation terms use this sensor's own pre-update estimate.
pub fn fusion_update(
    state: &mut SensorState,
    s: bool,
    neighbor_recons: &[(f64, f64)],
    phi: &[f64],
    psi: &[f64],
    cfg: &AlgorithmConfig,
    noise: &NoiseModel,
    threshold: f64,
    c_hat: f64,
) {
    let n = state.theta_hat.len();
    assert!(phi.len() == n && psi.len() == n, "fusion_update: dimension mismatch");
    let k = (state.k + 1) as f64;

    let local_gain = cfg.beta / k * (f_hat(&state.theta_hat, phi, threshold, noise) - bit(s));

    let consensus_gain = if neighbor_recons.is_empty() {
        0.0
    } else {
        let g = g_hat(&state.theta_hat, psi, c_hat);
        let pull: f64 = neighbor_recons.iter().map(|&(a, s_hat)| a * (s_hat - g)).sum();
        cfg.alpha / k.powf(1.0 - cfg.nu) * pull
    };

    for c in 0..n {
        state.theta_hat[c] += local_gain * phi[c] + consensus_gain * psi[c];
    }
    cfg.param_box.project_in_place(&mut state.theta_hat);
    state.k += 1;
}

/// The same step without the consensus term: each sensor learns from its own
/// binary measurements only.
pub fn noncooperative_update(
    state: &mut SensorState,
    s: bool,
    phi: &[f64],
    cfg: &AlgorithmConfig,
    noise: &NoiseModel,
    threshold: f64,
) {
    let n = state.theta_hat.len();
    assert!(phi.len() == n, "noncooperative_update: dimension mismatch");
    let k = (state.k + 1) as f64;
    let local_gain = cfg.beta / k * (f_hat(&state.theta_hat, phi, threshold, noise) - bit(s));
    for c in 0..n {
        state.theta_hat[c] += local_gain * phi[c];
    }
    cfg.param_box.project_in_place(&mut state.theta_hat);
    state.k += 1;
}

fn bit(s: bool) -> f64 {
    if s {
        1.0
    } else {
        0.0
    }
}

/// Constants entering the convergence-rate condition 2*sigma >= 1 - nu.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoryConstants {
    /// Excitation window length (the coding cycle length).
    pub h: u64,
    /// Lower bound on the windowed regressor excitation.
    pub delta_phi_sq: f64,
    /// Lower bound on the normalized coding excitation (1/n for basis cycling).
    pub delta_psi_sq: f64,
    pub phi_bar: f64,
    pub psi_bar: f64,
    pub theta_bar: f64,
    /// Infimum of the noise density over the reachable measurement range.
    pub f_lower: f64,
    /// Infimum of k^nu * (g(x - c_k) + g(-x - c_k)) over steps and the
    /// reachable inner-product range.
    pub g_lower: f64,
    pub lambda2: f64,
    pub sigma: f64,
    pub nu: f64,
}

impl TheoryConstants {
    pub fn two_sigma(&self) -> f64 {
        2.0 * self.sigma
    }

    /// Whether the stated convergence rate is guaranteed.
    pub fn rate_condition_holds(&self) -> bool {
        self.two_sigma() >= 1.0 - self.nu
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("computed bound `{name}` = {value} is not strictly positive")]
    NonPositiveBound { name: &'static str, value: f64 },
}

/// Evaluates every constant of the rate condition for a configured system.
///
/// The infimum over steps in `g_lower` is approximated on `k in [1,
/// k_max_for_inf]`: every integer up to 1024 and a 5% geometric ladder
/// beyond. k^nu * g_k(x) grows with k once the threshold nu*ln k passes |x|,
/// so the infimum sits at small k and the ladder tail only guards the
/// crossover region.
pub fn compute_theory_constants(
    system: &TrueSystem,
    graph: &NetworkGraph,
    cfg: &AlgorithmConfig,
    k_max_for_inf: u64,
) -> Result<TheoryConstants, ConstantsError> {
    let n = system.dim();
    let lambda2 = graph.lambda2()?;

    let phi_bar = system.regressor_norm_bound();
    let psi_bar = 1.0; // unit basis cycling
    let theta_bar = system.param_box().sup_norm();

    // Coding cycle: the window h = n gives (1/h) sum psi psi' = I/n.
    let h = n as u64;
    let delta_psi_sq = 1.0 / n as f64;

    let delta_phi_sq = windowed_excitation_bound(system, h);
    if delta_phi_sq <= 0.0 {
        return Err(ConstantsError::NonPositiveBound { name: "delta_phi_sq", value: delta_phi_sq });
    }

    let f_lower = noise_density_floor(system, phi_bar * theta_bar);
    if f_lower <= 0.0 {
        return Err(ConstantsError::NonPositiveBound { name: "f_lower", value: f_lower });
    }

    let g_lower = dither_gain_floor(psi_bar * theta_bar, cfg.nu, k_max_for_inf.max(1), 0.01);
    if g_lower <= 0.0 {
        return Err(ConstantsError::NonPositiveBound { name: "g_lower", value: g_lower });
    }

    let numerator =
        cfg.alpha * cfg.beta * h as f64 * lambda2 * f_lower * g_lower * delta_psi_sq * delta_phi_sq;
    let denominator = 2.0 * cfg.beta * phi_bar * phi_bar * f_lower
        + cfg.alpha * g_lower * h as f64 * lambda2 * delta_psi_sq;
    let sigma = numerator / denominator;

    Ok(TheoryConstants {
        h,
        delta_phi_sq,
        delta_psi_sq,
        phi_bar,
        psi_bar,
        theta_bar,
        f_lower,
        g_lower,
        lambda2,
        sigma,
        nu: cfg.nu,
    })
}

/// Smallest eigenvalue over starting steps of the h-step network regressor
/// sum. Scans starts up to 512; the supported families are constant or
/// geometrically convergent in k, so the minimum sits in that prefix.
fn windowed_excitation_bound(system: &TrueSystem, h: u64) -> f64 {
    let n = system.dim();
    let m = system.sensor_count();
    let mut min_eig = f64::INFINITY;
    let mut phi = vec![0.0; n];
    for start in 1..=512u64 {
        let mut acc = DMatrix::<f64>::zeros(n, n);
        for l in start..start + h {
            for i in 0..m {
                system.sensor(i).regressor.write_at(l, &mut phi);
                for a in 0..n {
                    for b in 0..n {
                        acc[(a, b)] += phi[a] * phi[b];
                    }
                }
            }
        }
        let eig = acc.symmetric_eigen();
        let smallest = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        min_eig = min_eig.min(smallest);
    }
    min_eig
}

/// Infimum of each sensor's noise density over |C_i - x| <= range.
fn noise_density_floor(system: &TrueSystem, range: f64) -> f64 {
    let mut floor = f64::INFINITY;
    for i in 0..system.sensor_count() {
        let s = system.sensor(i);
        let (lo, hi) = (s.threshold - range, s.threshold + range);
        let worst = match &s.noise {
            // Unimodal density: the infimum over an interval is at the
            // endpoint farther from the mode.
            NoiseModel::Gaussian { mean, .. } => {
                if (lo - mean).abs() >= (hi - mean).abs() {
                    s.noise.pdf(lo)
                } else {
                    s.noise.pdf(hi)
                }
            }
        };
        floor = floor.min(worst);
    }
    floor
}

/// Grid minimization of k^nu * (g(x - c_k) + g(-x - c_k)) over
/// x in [-range, range] (step <= x_step) and k in [1, k_max].
pub fn dither_gain_floor(range: f64, nu: f64, k_max: u64, x_step: f64) -> f64 {
    let steps = ((2.0 * range) / x_step).ceil().max(1.0) as usize;
    let xs: Vec<f64> = (0..=steps)
        .map(|i| -range + 2.0 * range * i as f64 / steps as f64)
        .collect();

    let mut min = f64::INFINITY;
    let mut k = 1u64;
    while k <= k_max {
        let c_hat = nu * (k as f64).ln();
        let scale = (k as f64).powf(nu);
        for &x in &xs {
            let v = scale * (laplace_pdf(x - c_hat) + laplace_pdf(-x - c_hat));
            if v < min {
                min = v;
            }
        }
        k = if k < 1024 { k + 1 } else { ((k as f64) * 1.05).ceil() as u64 };
    }
    min
}
