//! The communication layer: one-bit encoding, the event trigger, the lossy
//! channel, receiver-side reconstruction and the compensation functions.
//!
//! One Laplace dither per sensor per step serves both the encoder and the
//! trigger. A receiver sees only `(gamma, gamma * z)` and cannot distinguish
//! a lost packet from a silent sender.

use crate::error::ConfigError;
use crate::math::{laplace_cdf, NoiseModel};

/// Per-directed-edge Bernoulli erasure channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    p_true: f64,
}

impl ChannelModel {
    /// `p_true` is the probability that a packet is dropped. Values in
    /// [0, 1): 0 models a lossless link, 1 would erase everything.
    pub fn new(p_true: f64) -> Result<Self, ConfigError> {
        if !p_true.is_finite() || !(0.0..1.0).contains(&p_true) {
            return Err(ConfigError::new(
                "channel.p_true",
                format!("loss probability must be in [0, 1), got {p_true}"),
            ));
        }
        Ok(ChannelModel { p_true })
    }

    pub fn loss_probability(&self) -> f64 {
        self.p_true
    }
}

/// What one directed channel delivers in one step. `payload` is 0 exactly
/// when nothing arrived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReceivedPacket {
    pub gamma: bool,
    pub payload: i8,
}

impl ReceivedPacket {
    pub const EMPTY: ReceivedPacket = ReceivedPacket { gamma: false, payload: 0 };
}

/// One-bit encoder: the sign of psi' theta_hat + omega, with ties on the
/// nonpositive side mapping to -1.
pub fn encode(theta_hat: &[f64], psi: &[f64], omega: f64) -> i8 {
    let inner = dot(psi, theta_hat) + omega;
    if inner > 0.0 {
        1
    } else {
        -1
    }
}

/// Trigger threshold at step `k`: nu * ln k.
pub fn trigger_threshold(k: u64, nu: f64) -> f64 {
    assert!(k >= 1, "trigger threshold defined for k >= 1");
    assert!(nu >= 0.0, "nu must be nonnegative");
    nu * (k as f64).ln()
}

/// Event trigger: transmit iff |psi' theta_hat + omega| exceeds the current
/// threshold. Shares its dither with [`encode`].
pub fn should_trigger(theta_hat: &[f64], psi: &[f64], omega: f64, c_hat: f64) -> bool {
    debug_assert!(c_hat >= 0.0);
    (dot(psi, theta_hat) + omega).abs() > c_hat
}

/// Resolves one directed transmission. The caller draws `u_channel` every
/// step on every directed edge, triggered or not, so that traces stay
/// aligned across configurations; an untriggered step simply ignores the
/// erasure outcome.
pub fn transmit(channel: &ChannelModel, z: i8, triggered: bool, u_channel: f64) -> ReceivedPacket {
    debug_assert!(z == 1 || z == -1);
    let delivered = u_channel >= channel.p_true;
    if triggered && delivered {
        ReceivedPacket { gamma: true, payload: z }
    } else {
        ReceivedPacket::EMPTY
    }
}

/// Receiver-side reconstruction: scales the (possibly absent) payload by
/// 1/(1 - p) so erasures are compensated in expectation.
pub fn reconstruct(packet: ReceivedPacket, p_assumed: f64) -> f64 {
    assert!(
        (0.0..1.0).contains(&p_assumed),
        "reconstruct: p_assumed={p_assumed} outside [0, 1)"
    );
    debug_assert!(packet.gamma == (packet.payload != 0), "payload inconsistent with gamma");
    packet.payload as f64 / (1.0 - p_assumed)
}

/// Expected reconstructed value under the receiver's own estimate:
/// G(psi' theta_hat - c_hat) - G(-psi' theta_hat - c_hat).
pub fn g_hat(theta_hat: &[f64], psi: &[f64], c_hat: f64) -> f64 {
    debug_assert!(c_hat >= 0.0);
    let x = dot(psi, theta_hat);
    laplace_cdf(x - c_hat) - laplace_cdf(-x - c_hat)
}

/// Expected binary measurement under the current estimate: the noise CDF at
/// C - phi' theta_hat.
pub fn f_hat(theta_hat: &[f64], phi: &[f64], threshold: f64, noise: &NoiseModel) -> f64 {
    noise.cdf(threshold - dot(phi, theta_hat))
}

/// Probability that the trigger fires when psi' theta_hat = x and the
/// threshold is c_hat. Used by tests and the bit-rate analysis.
pub fn trigger_probability(x: f64, c_hat: f64) -> f64 {
    laplace_cdf(x - c_hat) + laplace_cdf(-x - c_hat)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "dot: dimension mismatch {} vs {}", a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
