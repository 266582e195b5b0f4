//! Counter-based random streams.
//!
//! Every random draw in a simulation is addressed by the tuple
//! `(master seed, run index, stream role, entity index, step)`. The draw is a
//! pure function of that tuple, so runs can execute in any order (or in
//! parallel) and reproduce bit-identical results, and any single stream can be
//! replayed in isolation without generating the others.
//!
//! The mapping is a chain of splitmix64 finalizer rounds, one absorbing each
//! key component, with a double round after the step. The finalizer is the
//! Stafford mix13 variant used by splitmix64 itself.

/// What a stream's draws are used for. Distinct roles give statistically
/// independent streams even for the same entity and step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StreamRole {
    /// Measurement noise, one draw per sensor per step.
    Noise,
    /// Quantizer dither, one draw per sensor per step.
    Dither,
    /// Packet erasure, one draw per directed edge per step.
    Channel,
}

impl StreamRole {
    fn tag(self) -> u64 {
        match self {
            StreamRole::Noise => 0x6e6f_6973_65,
            StreamRole::Dither => 0x6469_7468_6572,
            StreamRole::Channel => 0x6368_616e,
        }
    }
}

const INIT: u64 = 0x243f_6a88_85a3_08d3;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Handle for one `(seed, run, role, entity)` stream. Cheap to copy; draws
/// are indexed by step.
#[derive(Debug, Clone, Copy)]
pub struct Stream {
    prefix: u64,
}

impl Stream {
    pub fn new(master_seed: u64, run: u64, role: StreamRole, entity: u64) -> Self {
        let mut h = mix(master_seed ^ INIT);
        h = mix(h ^ run);
        h = mix(h ^ role.tag());
        h = mix(h ^ entity);
        Stream { prefix: h }
    }

    /// Raw 64-bit output for the given step.
    pub fn bits(&self, step: u64) -> u64 {
        mix(mix(self.prefix ^ step))
    }

    /// Uniform draw in the open interval (0, 1).
    pub fn uniform(&self, step: u64) -> f64 {
        // 53 mantissa bits, offset by half an ulp so 0 and 1 are excluded.
        ((self.bits(step) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }
}

/// One-off uniform draw without keeping a stream handle around.
pub fn uniform(master_seed: u64, run: u64, role: StreamRole, entity: u64, step: u64) -> f64 {
    Stream::new(master_seed, run, role, entity).uniform(step)
}
