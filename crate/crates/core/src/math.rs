//! Scalar distribution functions and the box projection used by the fusion
//! update.
//!
//! The Laplace family is the dither distribution of the one-bit encoder; its
//! CDF doubles as the compensation function applied on the receiver side.
//! Measurement noise is described by [`NoiseModel`]. Parameter constraints are
//! axis-aligned boxes, for which Euclidean projection is an exact
//! componentwise clamp.

use crate::error::ConfigError;
use statrs::function::erf;
use std::f64::consts::SQRT_2;

/// CDF of the standard Laplace distribution Lap(0, 1).
///
/// G(x) = exp(x)/2 for x <= 0 and 1 - exp(-x)/2 for x > 0.
/// Panics on non-finite input.
pub fn laplace_cdf(x: f64) -> f64 {
    assert!(x.is_finite(), "laplace_cdf: non-finite input {x}");
    if x <= 0.0 {
        0.5 * x.exp()
    } else {
        1.0 - 0.5 * (-x).exp()
    }
}

/// Density of Lap(0, 1): g(x) = exp(-|x|)/2. Panics on non-finite input.
pub fn laplace_pdf(x: f64) -> f64 {
    assert!(x.is_finite(), "laplace_pdf: non-finite input {x}");
    0.5 * (-x.abs()).exp()
}

/// Inverse CDF of Lap(0, 1), the sampler used for dithers: one uniform draw
/// in (0, 1) yields one Laplace variate. Panics unless 0 < u < 1.
pub fn laplace_quantile(u: f64) -> f64 {
    assert!(u > 0.0 && u < 1.0, "laplace_quantile: u={u} outside (0, 1)");
    if u <= 0.5 {
        (2.0 * u).ln()
    } else {
        -(2.0 * (1.0 - u)).ln()
    }
}

/// Measurement-noise distribution. Only the conditional CDF and density are
/// consumed by the estimator, so new families only need those two functions.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    Gaussian { mean: f64, std: f64 },
}

impl NoiseModel {
    pub fn gaussian(mean: f64, std: f64) -> Result<Self, ConfigError> {
        if !(std > 0.0) || !std.is_finite() || !mean.is_finite() {
            return Err(ConfigError::new(
                "noise.std",
                format!("gaussian noise requires finite mean and std > 0, got mean={mean}, std={std}"),
            ));
        }
        Ok(NoiseModel::Gaussian { mean, std })
    }

    /// Standard normal N(0, 1).
    pub fn standard_gaussian() -> Self {
        NoiseModel::Gaussian { mean: 0.0, std: 1.0 }
    }

    /// CDF at `x`. The Gaussian branch goes through erfc with absolute error
    /// below 1e-7 over the whole line.
    pub fn cdf(&self, x: f64) -> f64 {
        assert!(x.is_finite(), "NoiseModel::cdf: non-finite input {x}");
        match self {
            NoiseModel::Gaussian { mean, std } => {
                0.5 * erf::erfc(-(x - mean) / (std * SQRT_2))
            }
        }
    }

    /// Density at `x`.
    pub fn pdf(&self, x: f64) -> f64 {
        assert!(x.is_finite(), "NoiseModel::pdf: non-finite input {x}");
        match self {
            NoiseModel::Gaussian { mean, std } => {
                let z = (x - mean) / std;
                (-0.5 * z * z).exp() / (std * (2.0 * std::f64::consts::PI).sqrt())
            }
        }
    }

    /// Inverse CDF; turns one uniform draw into one noise sample.
    pub fn quantile(&self, u: f64) -> f64 {
        assert!(u > 0.0 && u < 1.0, "NoiseModel::quantile: u={u} outside (0, 1)");
        match self {
            NoiseModel::Gaussian { mean, std } => {
                mean + std * (-SQRT_2 * erf::erfc_inv(2.0 * u))
            }
        }
    }
}

/// Axis-aligned box constraint, the feasible set of the estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxConstraint {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl BoxConstraint {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self, ConfigError> {
        if lo.len() != hi.len() {
            return Err(ConfigError::new(
                "box",
                format!("lo has {} entries, hi has {}", lo.len(), hi.len()),
            ));
        }
        if lo.is_empty() {
            return Err(ConfigError::new("box", "box must have at least one dimension"));
        }
        for (j, (&l, &h)) in lo.iter().zip(&hi).enumerate() {
            if !l.is_finite() || !h.is_finite() || l > h {
                return Err(ConfigError::new(
                    "box",
                    format!("coordinate {j}: need finite lo <= hi, got [{l}, {h}]"),
                ));
            }
        }
        Ok(BoxConstraint { lo, hi })
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.lo)
                .zip(&self.hi)
                .all(|((&v, &l), &h)| l <= v && v <= h)
    }

    /// Euclidean projection onto the box: componentwise clamp. Panics on
    /// dimension mismatch.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        self.project_in_place(&mut out);
        out
    }

    pub fn project_in_place(&self, x: &mut [f64]) {
        assert_eq!(
            x.len(),
            self.dim(),
            "project: point has dimension {}, box has {}",
            x.len(),
            self.dim()
        );
        for ((v, &l), &h) in x.iter_mut().zip(&self.lo).zip(&self.hi) {
            *v = v.clamp(l, h);
        }
    }

    /// Largest Euclidean norm over the box, attained at a corner.
    pub fn sup_norm(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&l, &h)| l.abs().max(h.abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Stream, StreamRole};
    use approx::assert_abs_diff_eq;

    #[test]
    fn laplace_cdf_closed_form_points() {
        assert_abs_diff_eq!(laplace_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(laplace_cdf(std::f64::consts::LN_2), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(laplace_cdf(-std::f64::consts::LN_2), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn laplace_pdf_closed_form_points() {
        assert_abs_diff_eq!(laplace_pdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(laplace_pdf(1.0), 0.5 / std::f64::consts::E, epsilon = 1e-12);
    }

    #[test]
    fn laplace_pdf_matches_cdf_derivative() {
        // Central finite differences of the CDF on a grid.
        let h = 1e-6;
        let mut x = -5.0;
        while x <= 5.0 {
            let fd = (laplace_cdf(x + h) - laplace_cdf(x - h)) / (2.0 * h);
            assert!(
                (fd - laplace_pdf(x)).abs() < 1e-6,
                "x={x}: fd={fd}, pdf={}",
                laplace_pdf(x)
            );
            x += 0.1;
        }
    }

    #[test]
    fn laplace_quantile_points() {
        assert_abs_diff_eq!(laplace_quantile(0.5), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(laplace_quantile(0.75), std::f64::consts::LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(laplace_quantile(0.25), -std::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn laplace_quantile_inverts_cdf() {
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            assert!((laplace_cdf(laplace_quantile(u)) - u).abs() < 1e-12);
        }
    }

    #[test]
    fn laplace_pdf_integrates_to_one() {
        // Trapezoid rule on [-30, 30].
        let n = 600_000;
        let (a, b) = (-30.0, 30.0);
        let dx = (b - a) / n as f64;
        let mut sum = 0.5 * (laplace_pdf(a) + laplace_pdf(b));
        for i in 1..n {
            sum += laplace_pdf(a + i as f64 * dx);
        }
        assert!((sum * dx - 1.0).abs() < 1e-6);
    }

    #[test]
    fn laplace_sampling_passes_ks_test() {
        // Empirical CDF of 1e6 inverse-CDF samples vs the closed form.
        let stream = Stream::new(99, 0, StreamRole::Dither, 0);
        let n = 1_000_000usize;
        let mut samples: Vec<f64> = (0..n)
            .map(|step| laplace_quantile(stream.uniform(step as u64)))
            .collect();
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ks: f64 = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let g = laplace_cdf(x);
            let lo = i as f64 / n as f64;
            let hi = (i + 1) as f64 / n as f64;
            ks = ks.max((g - lo).abs()).max((g - hi).abs());
        }
        assert!(ks < 0.002, "KS distance {ks}");
    }

    #[test]
    #[should_panic(expected = "non-finite")]
    fn laplace_cdf_rejects_non_finite() {
        laplace_cdf(f64::NAN);
    }

    #[test]
    fn gaussian_cdf_points() {
        let n01 = NoiseModel::standard_gaussian();
        assert_abs_diff_eq!(n01.cdf(0.0), 0.5, epsilon = 1e-12);
        // Symmetry.
        assert!((n01.cdf(-3.0) - (1.0 - n01.cdf(3.0))).abs() < 1e-9);
        // Quantile cross-check against numerical integration of the density.
        let q = 1.959964;
        let mut integral = 0.5;
        let steps = 200_000;
        let dx = q / steps as f64;
        for i in 0..steps {
            let x0 = i as f64 * dx;
            let x1 = x0 + dx;
            integral += 0.5 * dx * (n01.pdf(x0) + n01.pdf(x1));
        }
        assert!((integral - 0.975).abs() < 1e-6, "oracle integral {integral}");
        assert!((n01.cdf(q) - 0.975).abs() < 1e-4);
        assert!((n01.cdf(q) - integral).abs() < 1e-7);
    }

    #[test]
    fn gaussian_quantile_inverts_cdf() {
        let n01 = NoiseModel::standard_gaussian();
        for i in 1..200 {
            let u = i as f64 / 200.0;
            assert!((n01.cdf(n01.quantile(u)) - u).abs() < 1e-9);
        }
        let scaled = NoiseModel::gaussian(1.5, 2.0).unwrap();
        assert!((scaled.quantile(0.5) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn gaussian_rejects_bad_std() {
        assert!(NoiseModel::gaussian(0.0, 0.0).is_err());
        assert!(NoiseModel::gaussian(0.0, -1.0).is_err());
        assert!(NoiseModel::gaussian(f64::NAN, 1.0).is_err());
    }

    fn sample_box() -> BoxConstraint {
        BoxConstraint::new(vec![0.0, -2.0, 0.0], vec![2.0, 0.0, 2.0]).unwrap()
    }

    #[test]
    fn projection_keeps_interior_points() {
        let b = sample_box();
        assert_eq!(b.project(&[0.5, -0.5, 0.5]), vec![0.5, -0.5, 0.5]);
    }

    #[test]
    fn projection_clamps_at_corners() {
        let b = sample_box();
        assert_eq!(b.project(&[3.0, -3.0, 3.0]), vec![2.0, -2.0, 2.0]);
    }

    #[test]
    fn projection_is_idempotent() {
        let b = sample_box();
        let p = b.project(&[5.0, 1.0, -7.0]);
        assert_eq!(b.project(&p), p);
    }

    #[test]
    fn projection_agrees_with_grid_search() {
        // Independent oracle: per-coordinate scan at resolution 1e-3.
        let b = sample_box();
        let stream = Stream::new(5, 0, StreamRole::Noise, 0);
        for trial in 0..50u64 {
            let x: Vec<f64> = (0..3)
                .map(|j| 8.0 * stream.uniform(trial * 3 + j) - 4.0)
                .collect();
            let fast = b.project(&x);
            for j in 0..3 {
                let (lo, hi) = (b.lo()[j], b.hi()[j]);
                let steps = ((hi - lo) / 1e-3).round() as usize;
                let mut best = lo;
                let mut best_d = (x[j] - lo).abs();
                for s in 0..=steps {
                    let cand = lo + s as f64 * 1e-3;
                    let d = (x[j] - cand).abs();
                    if d < best_d {
                        best_d = d;
                        best = cand;
                    }
                }
                assert!(
                    (fast[j] - best).abs() < 2e-3,
                    "coordinate {j}: clamp {} vs grid {best}",
                    fast[j]
                );
            }
        }
    }

    #[test]
    #[should_panic(expected = "dimension")]
    fn projection_rejects_dimension_mismatch() {
        sample_box().project(&[1.0, 2.0]);
    }

    #[test]
    fn box_validation() {
        assert!(BoxConstraint::new(vec![1.0], vec![0.0]).is_err());
        assert!(BoxConstraint::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(BoxConstraint::new(vec![], vec![]).is_err());
    }

    #[test]
    fn sup_norm_is_farthest_corner() {
        let b = sample_box();
        assert_abs_diff_eq!(b.sup_norm(), (12.0f64).sqrt(), epsilon = 1e-12);
    }
}
