//! Distributed parameter estimation from binary threshold measurements with
//! event-triggered one-bit communication over lossy links.
//!
//! A network of sensors jointly estimates an unknown parameter vector. Each
//! sensor only observes whether its analog measurement falls below a fixed
//! threshold, and only shares single sign bits with its neighbors: a Laplace
//! dither is added to a cyclically coded projection of the local estimate,
//! the sign is transmitted when its magnitude exceeds a growing threshold
//! `nu * ln k`, and packets are dropped independently with a known
//! probability. Receivers rescale whatever arrives by `1/(1 - p)` so that
//! erasures are compensated in expectation, and fuse the result with their
//! local quantized innovations under a box projection.
//!
//! The crate provides the building blocks (dither and noise distributions,
//! graph spectra, the encoder/trigger/channel/reconstruction chain, the
//! fusion update) plus a deterministic Monte Carlo harness. All randomness
//! is counter-based: a draw is a pure function of `(master seed, run, stream
//! role, entity, step)`, which makes runs order-independent, parallelizable
//! and reproducible in isolation.

pub mod error;
pub mod estimator;
pub mod graph;
pub mod math;
pub mod protocol;
pub mod rng;
pub mod sensing;
pub mod sim;

pub use error::{ConfigError, FitError, GraphError, UnrecordedCheckpoint};
pub use estimator::{
    compute_theory_constants, fusion_update, noncooperative_update, AlgorithmConfig,
    ConstantsError, SensorState, TheoryConstants,
};
pub use graph::NetworkGraph;
pub use math::{
    laplace_cdf, laplace_pdf, laplace_quantile, BoxConstraint, NoiseModel,
};
pub use protocol::{
    encode, f_hat, g_hat, reconstruct, should_trigger, transmit, trigger_probability,
    trigger_threshold, ChannelModel, ReceivedPacket,
};
pub use rng::{Stream, StreamRole};
pub use sensing::{coding_index, coding_vector, RegressorFamily, SensorModel, TrueSystem};
pub use sim::{
    aggregate, comm_bit_rate, fit_loglog_slope, log_checkpoints, run_monte_carlo,
    run_monte_carlo_seq, run_single, run_single_unchecked, ExperimentConfig, MetricsSummary, Mode,
    RunTrace,
};
