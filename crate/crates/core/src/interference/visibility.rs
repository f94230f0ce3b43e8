use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::SlitGeometry;
use super::pattern::ScreenIntensity;
use super::sampling::ScreenHistogram;
use crate::error::{Error, Result};

/// `Σ w_i exp(-2πi f x_i)`
pub fn fourier_component(centers: &[f64], weights: &[f64], frequency: f64) -> Complex64 {
    centers
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * Complex64::from_polar(1.0, -2.0 * PI * frequency * x))
        .sum()
}

/// Fringe contrast from the ratio of the fringe-frequency Fourier component to
/// the zero-frequency component. A pattern `E(x)(1 + V cos(2πfx + φ))` with a
/// slowly varying envelope returns `V`.
pub fn fourier_visibility(centers: &[f64], weights: &[f64], frequency: f64) -> f64 {
    let dc: f64 = weights.iter().sum();
    if dc <= 0.0 {
        return 0.0;
    }
    (2.0 * fourier_component(centers, weights, frequency).norm() / dc).clamp(0.0, 1.0)
}

pub fn estimate_visibility(hist: &ScreenHistogram, geometry: &SlitGeometry) -> Result<f64> {
    if hist.total == 0 {
        return Err(Error::domain("histogram", "total must be > 0"));
    }
    let weights: Vec<f64> = hist.counts.iter().map(|&c| c as f64).collect();
    Ok(fourier_visibility(
        &hist.centers(),
        &weights,
        geometry.fringe_frequency(),
    ))
}

/// Visibility of a closed-form intensity with the same estimator.
pub fn analytic_visibility(intensity: &ScreenIntensity, geometry: &SlitGeometry) -> f64 {
    fourier_visibility(
        &intensity.centers(),
        &intensity.weights,
        geometry.fringe_frequency(),
    )
}

/// `(max - min) / (max + min)` over one fringe period around the screen center.
/// Secondary diagnostic only; noisy on sparse histograms.
pub fn max_min_visibility(centers: &[f64], weights: &[f64], geometry: &SlitGeometry) -> f64 {
    let half_period = 0.5 / geometry.fringe_frequency();
    let (lo, hi) = centers
        .iter()
        .zip(weights)
        .filter(|(x, _)| x.abs() <= half_period)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (_, &w)| {
            (lo.min(w), hi.max(w))
        });
    if hi.is_nan() || hi <= 0.0 {
        return 0.0;
    }
    ((hi - lo) / (hi + lo)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FringeMetrics {
    pub visibility: f64,
    pub distinguishability: f64,
    /// `V² + D²`
    pub duality: f64,
    /// Visibility with the detectors off.
    pub baseline_visibility: f64,
}

impl FringeMetrics {
    pub fn new(visibility: f64, distinguishability: f64, baseline_visibility: f64) -> Self {
        FringeMetrics {
            visibility,
            distinguishability,
            duality: visibility * visibility + distinguishability * distinguishability,
            baseline_visibility,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub passes: bool,
    pub duality: f64,
    /// `V0² + tolerance`
    pub bound: f64,
    /// `bound - duality`; negative when the relation is violated.
    pub margin: f64,
}

pub fn duality_check(metrics: &FringeMetrics, tolerance: f64) -> DualityReport {
    let bound = metrics.baseline_visibility * metrics.baseline_visibility + tolerance;
    DualityReport {
        passes: metrics.duality <= bound,
        duality: metrics.duality,
        bound,
        margin: bound - metrics.duality,
    }
}
