use serde::{Deserialize, Serialize};

use super::field::{BinnedField, SlitGeometry};
use crate::error::{Error, Result};

/// How a which-way record affects the cross term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Complementarity baseline: the cross term is scaled by `sqrt(1 - D²)`.
    Orthodox,
    /// Passive local momentum transfer leaves the cross term intact.
    LocalPassive,
}

impl ModelKind {
    pub fn which_way_factor(self, distinguishability: f64) -> f64 {
        match self {
            ModelKind::Orthodox => (1.0 - distinguishability * distinguishability)
                .max(0.0)
                .sqrt(),
            ModelKind::LocalPassive => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Orthodox => "orthodox",
            ModelKind::LocalPassive => "local-passive",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orthodox" => Ok(ModelKind::Orthodox),
            "local-passive" | "local_passive" | "localpassive" => Ok(ModelKind::LocalPassive),
            other => Err(Error::domain(
                "model",
                format!("expected `orthodox` or `local-passive`, got `{other}`"),
            )),
        }
    }
}

/// Bin weights over the screen window, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenIntensity {
    pub edges: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ScreenIntensity {
    pub fn from_raw(edges: Vec<f64>, raw: Vec<f64>) -> Result<Self> {
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::domain(
                "intensity",
                "values must be finite and non-negative",
            ));
        }
        let total: f64 = raw.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::domain("intensity", "empty support"));
        }
        Ok(ScreenIntensity {
            edges,
            weights: raw.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }
}

/// Cross-term coherence for a model: which-way factor times the phase-jitter damping.
pub fn coherence(model: ModelKind, distinguishability: f64, sigma_phi: f64) -> f64 {
    model.which_way_factor(distinguishability) * (-0.5 * sigma_phi * sigma_phi).exp()
}

pub fn intensity_from_field(
    field: &BinnedField,
    model: ModelKind,
    distinguishability: f64,
    sigma_phi: f64,
    delta_phi_mean: f64,
) -> Result<ScreenIntensity> {
    if !(0.0..=1.0).contains(&distinguishability) {
        return Err(Error::domain("distinguishability", "must lie in [0, 1]"));
    }
    if sigma_phi.is_nan() || sigma_phi < 0.0 {
        return Err(Error::domain("sigma_phi", "must be ≥ 0"));
    }
    let a = coherence(model, distinguishability, sigma_phi);
    ScreenIntensity::from_raw(field.edges.clone(), field.raw_intensity(a, delta_phi_mean))
}

pub fn intensity_pattern(
    geometry: &SlitGeometry,
    model: ModelKind,
    distinguishability: f64,
    sigma_phi: f64,
    delta_phi_mean: f64,
) -> Result<ScreenIntensity> {
    geometry.validate()?;
    intensity_from_field(
        &BinnedField::new(geometry),
        model,
        distinguishability,
        sigma_phi,
        delta_phi_mean,
    )
}
