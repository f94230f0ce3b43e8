//! Position–momentum budget for resolving which slit a photon crossed by the
//! longitudinal momentum it leaves in a slow-light plate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::H;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyBudget {
    /// Vacuum wavelength, m.
    pub lambda: f64,
    /// Fractional speed decrease in the plate.
    pub speed_decrease: f64,
    /// Target fractional precision on the transferred momentum.
    pub precision: f64,
    /// Free-photon momentum h/λ.
    pub p: f64,
    /// Momentum left in the plate.
    pub p_m: f64,
    pub delta_p_m: f64,
    /// Minimum position spread allowed by Δx·Δp ≥ h/4π.
    pub delta_x_min: f64,
}

pub fn build_budget(lambda: f64, speed_decrease: f64, precision: f64) -> Result<UncertaintyBudget> {
    let mut problems = Vec::new();
    if !lambda.is_finite() || lambda <= 0.0 {
        problems.push(format!("lambda: must be > 0, got {lambda}"));
    }
    if !(speed_decrease > 0.0 && speed_decrease < 1.0) {
        problems.push(format!("s: must lie in (0, 1), got {speed_decrease}"));
    }
    if !(precision > 0.0 && precision <= 1.0) {
        problems.push(format!("f: must lie in (0, 1], got {precision}"));
    }
    if !problems.is_empty() {
        return Err(Error::Domain {
            field: "uncertainty".into(),
            message: problems.join("; "),
        });
    }

    let p = H / lambda;
    let p_m = speed_decrease * p;
    let delta_p_m = precision * p_m;
    Ok(UncertaintyBudget {
        lambda,
        speed_decrease,
        precision,
        p,
        p_m,
        delta_p_m,
        delta_x_min: H / (4.0 * PI * delta_p_m),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// `x1 / delta_x_min`
    pub margin: f64,
    pub x1: f64,
    pub delta_x_min: f64,
}

/// Whether a slit separation `x1` exceeds the budget's position bound. The
/// boundary itself counts as feasible.
pub fn whichway_feasible(x1: f64, budget: &UncertaintyBudget) -> Result<Feasibility> {
    if !x1.is_finite() || x1 <= 0.0 {
        return Err(Error::domain("x1", format!("must be > 0, got {x1}")));
    }
    Ok(Feasibility {
        feasible: x1 >= budget.delta_x_min,
        margin: x1 / budget.delta_x_min,
        x1,
        delta_x_min: budget.delta_x_min,
    })
}
