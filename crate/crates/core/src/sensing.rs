//! The true system being estimated: regressor schedules, binary threshold
//! measurements and the cyclic coding vectors.

use crate::error::ConfigError;
use crate::math::{BoxConstraint, NoiseModel};

/// Deterministic regressor schedule of one sensor.
#[derive(Debug, Clone, PartialEq)]
pub enum RegressorFamily {
    /// Six-sensor benchmark family over R^3. Each sensor excites a single
    /// coordinate with a geometrically vanishing transient:
    /// sensors 1..=6 produce (1-3^-k, 0, 0), (0, -1+4^-k, 0), (0, 0, 1-2^-k),
    /// (-1+2^-k, 0, 0), (0, 1-2^-k, 0), (0, 0, -1+5^-k).
    PaperExample { sensor: usize },
    /// The same vector at every step.
    Constant(Vec<f64>),
    /// Explicit per-step table, cycled when k exceeds its length.
    Table(Vec<Vec<f64>>),
}

impl RegressorFamily {
    pub fn paper_example(sensor: usize) -> Result<Self, ConfigError> {
        if !(1..=6).contains(&sensor) {
            return Err(ConfigError::new(
                "system.regressor_family",
                format!("paper_example sensor index {sensor} outside 1..=6"),
            ));
        }
        Ok(RegressorFamily::PaperExample { sensor })
    }

    pub fn dim(&self) -> usize {
        match self {
            RegressorFamily::PaperExample { .. } => 3,
            RegressorFamily::Constant(v) => v.len(),
            RegressorFamily::Table(rows) => rows.first().map_or(0, |r| r.len()),
        }
    }

    /// Regressor at step `k >= 1`, written into `out`.
    pub fn write_at(&self, k: u64, out: &mut [f64]) {
        assert!(k >= 1, "regressor step index starts at 1");
        assert_eq!(out.len(), self.dim(), "regressor output buffer has wrong length");
        match self {
            RegressorFamily::PaperExample { sensor } => {
                out.fill(0.0);
                // (coordinate, sign, decay base) per sensor.
                let (coord, sign, base) = match sensor {
                    1 => (0, 1.0, 3.0),
                    2 => (1, -1.0, 4.0),
                    3 => (2, 1.0, 2.0),
                    4 => (0, -1.0, 2.0),
                    5 => (1, 1.0, 2.0),
                    6 => (2, -1.0, 5.0),
                    _ => unreachable!("validated at construction"),
                };
                let decay = (1.0f64 / base).powi(k.min(i32::MAX as u64) as i32);
                out[coord] = sign * (1.0 - decay);
            }
            RegressorFamily::Constant(v) => out.copy_from_slice(v),
            RegressorFamily::Table(rows) => {
                let idx = ((k - 1) % rows.len() as u64) as usize;
                out.copy_from_slice(&rows[idx]);
            }
        }
    }

    pub fn at(&self, k: u64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.write_at(k, &mut out);
        out
    }

    /// Supremum of the regressor norm over all steps.
    pub fn norm_bound(&self) -> f64 {
        match self {
            RegressorFamily::PaperExample { .. } => 1.0,
            RegressorFamily::Constant(v) => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            RegressorFamily::Table(rows) => rows
                .iter()
                .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
                .fold(0.0, f64::max),
        }
    }
}

/// One sensor: its regressor schedule, measurement threshold and noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    pub regressor: RegressorFamily,
    pub threshold: f64,
    pub noise: NoiseModel,
}

/// The full plant: the unknown parameter, its constraint box and the sensors.
/// Known to the simulator only; estimators never read `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrueSystem {
    theta: Vec<f64>,
    param_box: BoxConstraint,
    sensors: Vec<SensorModel>,
}

impl TrueSystem {
    pub fn new(
        theta: Vec<f64>,
        param_box: BoxConstraint,
        sensors: Vec<SensorModel>,
    ) -> Result<Self, ConfigError> {
        let n = theta.len();
        if n == 0 {
            return Err(ConfigError::new("system.theta", "parameter must be nonempty"));
        }
        if param_box.dim() != n {
            return Err(ConfigError::new(
                "system.box",
                format!("box dimension {} does not match theta dimension {n}", param_box.dim()),
            ));
        }
        if !param_box.contains(&theta) {
            return Err(ConfigError::new("system.theta", "true parameter lies outside the box"));
        }
        if sensors.is_empty() {
            return Err(ConfigError::new("system.sensors", "need at least one sensor"));
        }
        for (i, s) in sensors.iter().enumerate() {
            if s.regressor.dim() != n {
                return Err(ConfigError::new(
                    format!("system.sensors[{i}]"),
                    format!("regressor dimension {} does not match theta dimension {n}", s.regressor.dim()),
                ));
            }
            if !s.threshold.is_finite() {
                return Err(ConfigError::new(
                    format!("system.sensors[{i}].threshold"),
                    "threshold must be finite",
                ));
            }
        }
        Ok(TrueSystem { theta, param_box, sensors })
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn sensor_count(&self) -> usize {
        self.sensors.len()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn param_box(&self) -> &BoxConstraint {
        &self.param_box
    }

    pub fn sensor(&self, i: usize) -> &SensorModel {
        &self.sensors[i]
    }

    /// Largest regressor norm over all sensors.
    pub fn regressor_norm_bound(&self) -> f64 {
        self.sensors.iter().map(|s| s.regressor.norm_bound()).fold(0.0, f64::max)
    }

    /// Binary measurement of sensor `i` (0-based) at step `k`: indicator of
    /// y <= C_i where y = phi' theta + d. Consumes exactly one uniform draw.
    pub fn measure(&self, k: u64, sensor: usize, u_noise: f64) -> bool {
        let s = &self.sensors[sensor];
        let mut phi = vec![0.0; self.dim()];
        s.regressor.write_at(k, &mut phi);
        self.measure_with(&phi, sensor, u_noise)
    }

    /// Same as [`measure`](Self::measure) with the regressor already in hand.
    pub fn measure_with(&self, phi: &[f64], sensor: usize, u_noise: f64) -> bool {
        let s = &self.sensors[sensor];
        let d = s.noise.quantile(u_noise);
        let y: f64 = phi.iter().zip(&self.theta).map(|(a, b)| a * b).sum::<f64>() + d;
        y <= s.threshold
    }
}

/// Coding vector at step `k`: the standard basis vector with index
/// `(k - 1) mod n`, so any window of n consecutive steps spans R^n.
pub fn coding_vector(k: u64, n: usize) -> Vec<f64> {
    let mut psi = vec![0.0; n];
    psi[coding_index(k, n)] = 1.0;
    psi
}

/// Index of the active coordinate at step `k`.
pub fn coding_index(k: u64, n: usize) -> usize {
    assert!(k >= 1 && n >= 1, "coding vector needs k >= 1, n >= 1");
    ((k - 1) % n as u64) as usize
}
