//! Piezoelectric plate readout.
//!
//! The photon's boundary impulse is converted to a mean force over the pulse
//! duration and then to charge through the effective piezoelectric
//! coefficient. The charge is drained through the variable resistor during the
//! measurement window; only the drained fraction `eta` reaches the meter. Each
//! plate carries independent Gaussian kTC noise, and the path is inferred from
//! the larger of the two readings.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erf_inv};

use crate::constants::{HBAR, K_B};
use crate::error::{Error, Result};
use crate::optics::{BoundaryCrossing, Path, PhotonState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateCircuit {
    /// Ω; `f64::INFINITY` is an open resistor.
    pub resistance: f64,
    /// F
    pub capacitance: f64,
    /// K
    pub temperature: f64,
    /// Effective piezoelectric charge coefficient, C/N.
    pub d_eff: f64,
    /// Photon interaction duration, s.
    pub pulse_duration: f64,
    /// Measurement window, s.
    pub measurement_window: f64,
    /// Dimensionless coupling amplification, 1 = physical.
    pub gain: f64,
    pub switch_on: bool,
}

impl Default for PlateCircuit {
    fn default() -> Self {
        PlateCircuit {
            resistance: 1.0e3,
            capacitance: 10.0e-12,
            temperature: 300.0,
            d_eff: 2.0e-12,
            pulse_duration: 1.0e-9,
            measurement_window: 1.0e-6,
            gain: 1.0,
            switch_on: false,
        }
    }
}

impl PlateCircuit {
    /// Every violated invariant, as `field: reason`.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let mut positive = |name: &str, x: f64| {
            if !(x.is_finite() && x > 0.0) {
                v.push(format!("{name}: must be > 0, got {x}"));
            }
        };
        positive("capacitance", self.capacitance);
        positive("d_eff", self.d_eff);
        positive("pulse_duration", self.pulse_duration);
        positive("measurement_window", self.measurement_window);
        if self.resistance.is_nan() || self.resistance <= 0.0 {
            v.push(format!(
                "resistance: must be > 0 or inf, got {}",
                self.resistance
            ));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            v.push(format!(
                "temperature: must be ≥ 0, got {}",
                self.temperature
            ));
        }
        if !(self.gain.is_finite() && self.gain >= 0.0) {
            v.push(format!("gain: must be ≥ 0, got {}", self.gain));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::domain("plate", v.join("; ")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InferredPath {
    SlitOne,
    SlitTwo,
    Undetermined,
}

impl From<Path> for InferredPath {
    fn from(p: Path) -> Self {
        match p {
            Path::SlitOne => InferredPath::SlitOne,
            Path::SlitTwo => InferredPath::SlitTwo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionOutcome {
    pub q_signal: f64,
    pub sigma_q: f64,
    /// Ratio of the read-out charge `eta * q_signal` to the noise.
    pub snr: f64,
    pub eta: f64,
    pub distinguishability: f64,
    pub omega_red: f64,
    pub delta_omega_red: f64,
    pub inferred_path: InferredPath,
}

impl DetectionOutcome {
    pub fn is_correct(&self, truth: Path) -> bool {
        self.inferred_path == InferredPath::from(truth)
    }
}

pub fn photon_charge(p_m: f64, circuit: &PlateCircuit) -> f64 {
    circuit.gain * circuit.d_eff * p_m.abs() / circuit.pulse_duration
}

/// kTC charge noise.
pub fn thermal_noise_sigma(circuit: &PlateCircuit) -> f64 {
    (K_B * circuit.temperature * circuit.capacitance).sqrt()
}

pub fn discharge_fraction(circuit: &PlateCircuit) -> f64 {
    if !circuit.switch_on || circuit.resistance.is_infinite() {
        return 0.0;
    }
    -(-circuit.measurement_window / (circuit.resistance * circuit.capacitance)).exp_m1()
}

/// Optimal two-plate discrimination: the struck plate reads `q + σ·z1`, the
/// other `σ·z2`, and the larger reading is correct with probability
/// `(1 + erf(q / 2σ)) / 2`.
pub fn distinguishability(q_signal: f64, sigma_q: f64) -> f64 {
    if q_signal <= 0.0 {
        return 0.0;
    }
    if sigma_q == 0.0 {
        return 1.0;
    }
    erf(q_signal / (2.0 * sigma_q)).clamp(0.0, 1.0)
}

/// Read-out SNR needed for a target distinguishability.
pub fn snr_for_distinguishability(d: f64) -> f64 {
    2.0 * erf_inv(d)
}

/// Gain that puts the plate at distinguishability `d` for a photon leaving `p_m`.
pub fn gain_for_distinguishability(d: f64, p_m: f64, circuit: &PlateCircuit) -> Result<f64> {
    if !(0.0..1.0).contains(&d) {
        return Err(Error::domain(
            "distinguishability",
            "target must lie in [0, 1)",
        ));
    }
    let eta = discharge_fraction(circuit);
    let unit = PlateCircuit {
        gain: 1.0,
        ..*circuit
    };
    let q_unit = eta * photon_charge(p_m, &unit);
    if q_unit <= 0.0 {
        return Err(Error::domain(
            "plate",
            "no read-out charge; switch off or open resistor",
        ));
    }
    Ok(snr_for_distinguishability(d) * thermal_noise_sigma(circuit) / q_unit)
}

/// Mean redshift and its jitter from discharging `eta` of the stored energy q²/2C.
pub fn redshift_of_detection(q_signal: f64, circuit: &PlateCircuit, eta: f64) -> (f64, f64) {
    let omega_red = eta * q_signal * q_signal / (2.0 * circuit.capacitance * HBAR);
    let jitter = if q_signal > 0.0 {
        omega_red * thermal_noise_sigma(circuit) / q_signal
    } else {
        0.0
    };
    (omega_red, jitter)
}

/// Closed-form part of a detection: everything except the noise draws.
pub fn expected_outcome(crossing: &BoundaryCrossing, circuit: &PlateCircuit) -> DetectionOutcome {
    let q_signal = photon_charge(crossing.p_m, circuit);
    let sigma_q = thermal_noise_sigma(circuit);
    if !circuit.switch_on {
        return DetectionOutcome {
            q_signal,
            sigma_q,
            snr: 0.0,
            eta: 0.0,
            distinguishability: 0.0,
            omega_red: 0.0,
            delta_omega_red: 0.0,
            inferred_path: InferredPath::Undetermined,
        };
    }
    let eta = discharge_fraction(circuit);
    let q_read = eta * q_signal;
    let snr = if q_read == 0.0 {
        0.0
    } else if sigma_q == 0.0 {
        f64::INFINITY
    } else {
        q_read / sigma_q
    };
    let (omega_red, delta_omega_red) = redshift_of_detection(q_signal, circuit, eta);
    DetectionOutcome {
        q_signal,
        sigma_q,
        snr,
        eta,
        distinguishability: distinguishability(q_read, sigma_q),
        omega_red,
        delta_omega_red,
        inferred_path: InferredPath::Undetermined,
    }
}

/// Read both plates once. With the switch off nothing is read and no random
/// numbers are drawn.
pub fn detect<R: Rng + ?Sized>(
    photon: &PhotonState,
    crossing: &BoundaryCrossing,
    circuit: &PlateCircuit,
    rng: &mut R,
) -> DetectionOutcome {
    let mut outcome = expected_outcome(crossing, circuit);
    if !circuit.switch_on {
        return outcome;
    }
    let q_read = outcome.eta * outcome.q_signal;
    let z_struck: f64 = rng.sample(StandardNormal);
    let z_other: f64 = rng.sample(StandardNormal);
    let struck = q_read + outcome.sigma_q * z_struck;
    let other = outcome.sigma_q * z_other;
    outcome.inferred_path = if struck > other {
        photon.path.into()
    } else if other > struck {
        photon.path.other().into()
    } else {
        InferredPath::Undetermined
    };
    outcome
}
