//! Media, photon momentum at boundaries, and the per-photon energy ledger.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumSpec {
    pub label: String,
    /// Refractive index; the speed factor is `1/n`.
    pub n: f64,
    /// Thickness in meters.
    pub thickness: f64,
}

impl MediumSpec {
    pub fn new(label: impl Into<String>, n: f64, thickness: f64) -> Result<Self> {
        let medium = MediumSpec {
            label: label.into(),
            n,
            thickness,
        };
        medium.validate()?;
        Ok(medium)
    }

    pub fn vacuum() -> Self {
        MediumSpec {
            label: "vacuum".into(),
            n: 1.0,
            thickness: 0.0,
        }
    }

    /// A medium in which light travels `1 - speed_decrease` times as fast as in vacuum.
    pub fn from_speed_decrease(label: impl Into<String>, speed_decrease: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&speed_decrease) {
            return Err(Error::domain("speed_decrease", "must lie in [0, 1)"));
        }
        MediumSpec::new(label, 1.0 / (1.0 - speed_decrease), 0.0)
    }

    pub fn speed_factor(&self) -> f64 {
        1.0 / self.n
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_finite() || self.n < 1.0 {
            return Err(Error::domain(
                format!("{}.n", self.label),
                format!("refractive index must be ≥ 1, got {}", self.n),
            ));
        }
        if !self.thickness.is_finite() || self.thickness < 0.0 {
            return Err(Error::domain(
                format!("{}.thickness", self.label),
                format!("must be ≥ 0, got {}", self.thickness),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MomentumConvention {
    /// `p = ħ k0 / n`
    #[default]
    Abraham,
    /// `p = n ħ k0`
    Minkowski,
}

impl MomentumConvention {
    /// Wave number carried by the photon in a medium of index `n`.
    pub fn wave_number(self, k0: f64, n: f64) -> f64 {
        match self {
            MomentumConvention::Abraham => k0 / n,
            MomentumConvention::Minkowski => k0 * n,
        }
    }
}

/// Longitudinal bookkeeping at one interface. Momenta are signed scalars along
/// the propagation axis; positive `p_m` pushes the medium forward.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCrossing {
    pub k1: f64,
    pub k2: f64,
    pub k_m: f64,
    pub p_m: f64,
    pub convention: MomentumConvention,
}

pub fn vacuum_wave_number(lambda0: f64) -> f64 {
    2.0 * PI / lambda0
}

pub fn momentum_transfer(
    medium_a: &MediumSpec,
    medium_b: &MediumSpec,
    lambda0: f64,
    convention: MomentumConvention,
) -> Result<BoundaryCrossing> {
    if !lambda0.is_finite() || lambda0 <= 0.0 {
        return Err(Error::domain(
            "lambda0",
            format!("must be > 0, got {lambda0}"),
        ));
    }
    medium_a.validate()?;
    medium_b.validate()?;

    let k0 = vacuum_wave_number(lambda0);
    let k1 = convention.wave_number(k0, medium_a.n);
    let k2 = convention.wave_number(k0, medium_b.n);
    // p_m is formed as ħk1 − ħk2 so the momentum closure is exact in floating point.
    let p_m = HBAR * k1 - HBAR * k2;
    Ok(BoundaryCrossing {
        k1,
        k2,
        k_m: k1 - k2,
        p_m,
        convention,
    })
}

/// Entry and exit crossings of a plate immersed in `ambient`. The exit impulse
/// is the entry impulse with the sign reversed.
pub fn plate_crossings(
    ambient: &MediumSpec,
    plate: &MediumSpec,
    lambda0: f64,
    convention: MomentumConvention,
) -> Result<(BoundaryCrossing, BoundaryCrossing)> {
    Ok((
        momentum_transfer(ambient, plate, lambda0, convention)?,
        momentum_transfer(plate, ambient, lambda0, convention)?,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLedger {
    pub omega1: f64,
    pub omega2: f64,
    pub omega_red: f64,
    pub delta_omega_red_sample: f64,
}

impl EnergyLedger {
    pub fn untouched(omega: f64) -> Self {
        EnergyLedger {
            omega1: omega,
            omega2: omega,
            omega_red: 0.0,
            delta_omega_red_sample: 0.0,
        }
    }

    /// Relative residual of `ω1 = ω2 + ω_red + Δω_red`.
    pub fn residual(&self) -> f64 {
        (self.omega1 - (self.omega2 + self.omega_red + self.delta_omega_red_sample)).abs()
            / self.omega1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Path {
    SlitOne,
    SlitTwo,
}

impl Path {
    pub fn other(self) -> Path {
        match self {
            Path::SlitOne => Path::SlitTwo,
            Path::SlitTwo => Path::SlitOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonState {
    pub lambda0: f64,
    pub omega: f64,
    pub phase: f64,
    pub ledger: EnergyLedger,
    pub path: Path,
}

impl PhotonState {
    pub fn new(lambda0: f64, path: Path) -> Result<Self> {
        if !lambda0.is_finite() || lambda0 <= 0.0 {
            return Err(Error::domain(
                "lambda0",
                format!("must be > 0, got {lambda0}"),
            ));
        }
        let omega = 2.0 * PI * C / lambda0;
        Ok(PhotonState {
            lambda0,
            omega,
            phase: 0.0,
            ledger: EnergyLedger::untouched(omega),
            path,
        })
    }

    /// Wave number inside a medium under the given convention.
    pub fn wave_number_in(&self, medium: &MediumSpec, convention: MomentumConvention) -> f64 {
        convention.wave_number(self.omega / C, medium.n)
    }
}

/// Remove `omega_red + jitter_sample` from the photon and record it in the ledger.
pub fn apply_redshift(
    photon: &PhotonState,
    omega_red: f64,
    jitter_sample: f64,
) -> Result<PhotonState> {
    if !omega_red.is_finite() || omega_red < 0.0 {
        return Err(Error::domain(
            "omega_red",
            format!("must be ≥ 0, got {omega_red}"),
        ));
    }
    if !jitter_sample.is_finite() {
        return Err(Error::domain("jitter_sample", "must be finite"));
    }
    let omega1 = photon.omega;
    let omega2 = omega1 - omega_red - jitter_sample;
    if omega2 <= 0.0 {
        return Err(Error::domain("omega_red", "redshift exceeds photon energy"));
    }
    Ok(PhotonState {
        omega: omega2,
        ledger: EnergyLedger {
            omega1,
            omega2,
            omega_red,
            delta_omega_red_sample: jitter_sample,
        },
        ..*photon
    })
}

/// Optical phase `n ω d / c` accumulated over `distance`.
pub fn propagation_phase(omega: f64, distance: f64, medium: &MediumSpec) -> Result<f64> {
    if !distance.is_finite() || distance < 0.0 {
        return Err(Error::domain(
            "distance",
            format!("must be ≥ 0, got {distance}"),
        ));
    }
    Ok(medium.n * omega * distance / C)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::H;
    use proptest::prelude::*;

    fn glass() -> MediumSpec {
        MediumSpec::new("plate", 1.25, 1e-3).unwrap()
    }

    #[test]
    fn abraham_vacuum_to_plate_is_one_fifth_of_free_momentum() {
        let x = momentum_transfer(
            &MediumSpec::vacuum(),
            &glass(),
            630e-9,
            MomentumConvention::Abraham,
        )
        .unwrap();
        let expected = 0.2 * H / 630e-9;
        assert!((x.p_m - expected).abs() / expected < 1e-12);
        assert!((x.p_m - 2.104e-28).abs() < 0.001e-28);
    }

    #[test]
    fn minkowski_vacuum_to_plate() {
        let x = momentum_transfer(
            &MediumSpec::vacuum(),
            &glass(),
            630e-9,
            MomentumConvention::Minkowski,
        )
        .unwrap();
        // (1 - 1.25) * h / 630 nm
        let expected = -2.629_392_916_666_667e-28;
        assert!((x.p_m - expected).abs() / expected.abs() < 1e-12);
    }

    #[test]
    fn identical_media_transfer_nothing() {
        for conv in [MomentumConvention::Abraham, MomentumConvention::Minkowski] {
            let x = momentum_transfer(&glass(), &glass(), 812e-9, conv).unwrap();
            assert_eq!(x.p_m, 0.0);
            assert_eq!(x.k_m, 0.0);
        }
    }

    #[test]
    fn crossing_rejects_bad_inputs() {
        let err = momentum_transfer(
            &MediumSpec::vacuum(),
            &glass(),
            0.0,
            MomentumConvention::Abraham,
        )
        .unwrap_err();
        assert!(err.to_string().contains("lambda0"));
        let thin = MediumSpec {
            label: "b".into(),
            n: 0.9,
            thickness: 0.0,
        };
        let err = momentum_transfer(
            &MediumSpec::vacuum(),
            &thin,
            630e-9,
            MomentumConvention::Abraham,
        )
        .unwrap_err();
        assert!(err.to_string().starts_with("b.n"));
    }

    #[test]
    fn plate_exit_reverses_entry_impulse() {
        let (entry, exit) = plate_crossings(
            &MediumSpec::vacuum(),
            &glass(),
            630e-9,
            MomentumConvention::Abraham,
        )
        .unwrap();
        assert!(entry.p_m > 0.0);
        assert!((entry.p_m + exit.p_m).abs() < 1e-12 * entry.p_m);
    }

    #[test]
    fn speed_decrease_maps_to_index() {
        let m = MediumSpec::from_speed_decrease("m", 0.2).unwrap();
        assert!((m.n - 1.25).abs() < 1e-15);
        assert!((m.speed_factor() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_redshift_leaves_photon_unchanged() {
        let p = PhotonState {
            omega: 2.99e15,
            ..PhotonState::new(630e-9, Path::SlitOne).unwrap()
        };
        let q = apply_redshift(&p, 0.0, 0.0).unwrap();
        assert_eq!(q.omega, p.omega);
        assert_eq!(q.ledger.omega1, q.ledger.omega2);
    }

    #[test]
    fn redshift_ledger_sums_exactly() {
        let p = PhotonState {
            omega: 2.99e15,
            phase: 1.5,
            ..PhotonState::new(630e-9, Path::SlitTwo).unwrap()
        };
        let q = apply_redshift(&p, 1.0e9, 2.0e8).unwrap();
        assert_eq!(q.omega, 2.99e15 - 1.2e9);
        let l = q.ledger;
        assert_eq!(l.omega1, l.omega2 + l.omega_red + l.delta_omega_red_sample);
        assert_eq!(q.phase, 1.5);
    }

    #[test]
    fn over_redshift_is_rejected() {
        let p = PhotonState {
            omega: 1.0e9,
            ..PhotonState::new(630e-9, Path::SlitOne).unwrap()
        };
        let err = apply_redshift(&p, 2.0e9, 0.0).unwrap_err();
        assert!(err.to_string().contains("redshift exceeds photon energy"));
    }

    #[test]
    fn fresh_photon_frequency() {
        let p = PhotonState::new(630e-9, Path::SlitOne).unwrap();
        assert!((p.omega - 2.0 * PI * C / 630e-9).abs() < 1.0);
        assert!(PhotonState::new(-1.0, Path::SlitOne).is_err());
    }

    #[test]
    fn phase_examples() {
        let vac = MediumSpec::vacuum();
        assert_eq!(propagation_phase(3e15, 0.0, &glass()).unwrap(), 0.0);
        let dphi = propagation_phase(1.496e9, 1.0, &vac).unwrap();
        assert!((dphi - 4.990).abs() < 1e-3);
        assert!(propagation_phase(1.0, -1.0, &vac).is_err());
    }

    proptest! {
        #[test]
        fn momentum_closure_is_exact(na in 1.0f64..3.0, nb in 1.0f64..3.0, lambda in 1e-7f64..2e-6, mink in any::<bool>()) {
            let conv = if mink { MomentumConvention::Minkowski } else { MomentumConvention::Abraham };
            let a = MediumSpec::new("a", na, 0.0).unwrap();
            let b = MediumSpec::new("b", nb, 0.0).unwrap();
            let x = momentum_transfer(&a, &b, lambda, conv).unwrap();
            prop_assert_eq!(HBAR * x.k1 - HBAR * x.k2 - x.p_m, 0.0);
            prop_assert!((x.k2 + x.k_m - x.k1).abs() <= 1e-15 * x.k1);
            prop_assert!((HBAR * x.k_m - x.p_m).abs() <= 1e-12 * (HBAR * x.k1));
            if nb > na {
                match conv {
                    MomentumConvention::Abraham => prop_assert!(x.p_m > 0.0),
                    MomentumConvention::Minkowski => prop_assert!(x.p_m < 0.0),
                }
            }
        }

        #[test]
        fn conventions_agree_only_for_identical_media(na in 1.0f64..3.0, nb in 1.0f64..3.0) {
            let a = MediumSpec::new("a", na, 0.0).unwrap();
            let b = MediumSpec::new("b", nb, 0.0).unwrap();
            let ab = momentum_transfer(&a, &b, 630e-9, MomentumConvention::Abraham).unwrap();
            let mk = momentum_transfer(&a, &b, 630e-9, MomentumConvention::Minkowski).unwrap();
            prop_assert_eq!(ab.p_m == 0.0 && mk.p_m == 0.0, na == nb);
        }

        #[test]
        fn energy_ledger_closes(omega in 1e14f64..1e16, frac in 0.0f64..0.5, jit in -0.1f64..0.1) {
            let p = PhotonState { omega, ..PhotonState::new(630e-9, Path::SlitOne).unwrap() };
            let red = frac * omega;
            let q = apply_redshift(&p, red, jit * red).unwrap();
            prop_assert!(q.ledger.residual() < 1e-12);
            prop_assert!(q.ledger.omega2 > 0.0);
        }

        #[test]
        fn phase_is_linear(omega in 1e9f64..1e16, d in 0.0f64..10.0, n in 1.0f64..2.0) {
            let m = MediumSpec::new("m", n, 0.0).unwrap();
            let one = propagation_phase(omega, d, &m).unwrap();
            let twice_d = propagation_phase(omega, 2.0 * d, &m).unwrap();
            let twice_w = propagation_phase(2.0 * omega, d, &m).unwrap();
            prop_assert!((twice_d - 2.0 * one).abs() <= 1e-12 * one.abs().max(1e-300));
            prop_assert!((twice_w - 2.0 * one).abs() <= 1e-12 * one.abs().max(1e-300));
        }
    }
}
