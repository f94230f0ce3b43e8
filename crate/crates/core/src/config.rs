//! Experiment configuration.
//!
//! A config is a TOML document (or the JSON echo written into `summary.json`).
//! Every key is optional and falls back to the documented default; unknown
//! keys are rejected. All invariant violations are collected and reported
//! together with their field paths.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::PlateCircuit;
use crate::error::{Error, Result};
use crate::interference::{ModelKind, SlitGeometry};
use crate::optics::MomentumConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseJitterMode {
    /// Damp the cross term by `exp(-σφ²/2)`.
    #[default]
    Analytic,
    /// Draw a phase per photon and land it on that photon's own pattern.
    Sampled,
}

/// Where the redshift applied to each photon comes from.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum RedshiftSource {
    /// Discharged plate energy, computed by the detector model.
    #[default]
    Detector,
    /// Fixed mean redshift and jitter std, rad/s.
    Fixed {
        omega_red: f64,
        delta_omega_red: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub geometry: SlitGeometry,
    pub plate: PlateCircuit,
    /// Refractive index of the detector plates.
    pub medium_n: f64,
    /// Refractive index between the plates and the screen.
    pub screen_medium_n: f64,
    pub convention: MomentumConvention,
    pub model: ModelKind,
    pub n_photons: u64,
    pub seed: u64,
    pub phase_jitter_mode: PhaseJitterMode,
    pub redshift: RedshiftSource,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            geometry: SlitGeometry::default(),
            plate: PlateCircuit::default(),
            medium_n: 1.25,
            screen_medium_n: 1.0,
            convention: MomentumConvention::Abraham,
            model: ModelKind::Orthodox,
            n_photons: 1_000_000,
            seed: 0x5eed,
            phase_jitter_mode: PhaseJitterMode::Analytic,
            redshift: RedshiftSource::Detector,
        }
    }
}

impl ExperimentConfig {
    pub fn violations(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .geometry
            .violations()
            .into_iter()
            .map(|e| format!("geometry.{e}"))
            .collect();
        v.extend(
            self.plate
                .violations()
                .into_iter()
                .map(|e| format!("plate.{e}")),
        );
        if !(self.medium_n.is_finite() && self.medium_n >= 1.0) {
            v.push("medium_n: must be ≥ 1".into());
        }
        if !(self.screen_medium_n.is_finite() && self.screen_medium_n >= 1.0) {
            v.push("screen_medium_n: must be ≥ 1".into());
        }
        if self.n_photons == 0 {
            v.push("n_photons: must be ≥ 1".into());
        }
        if let RedshiftSource::Fixed {
            omega_red,
            delta_omega_red,
        } = self.redshift
        {
            if !(omega_red.is_finite() && omega_red >= 0.0) {
                v.push("redshift.omega_red: must be ≥ 0".into());
            }
            if !(delta_omega_red.is_finite() && delta_omega_red >= 0.0) {
                v.push("redshift.delta_omega_red: must be ≥ 0".into());
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    pub fn to_file(&self) -> ConfigFile {
        let g = &self.geometry;
        let p = &self.plate;
        let redshift = match self.redshift {
            RedshiftSource::Detector => RedshiftFile {
                source: Some("detector".into()),
                omega_red: None,
                delta_omega_red: None,
            },
            RedshiftSource::Fixed {
                omega_red,
                delta_omega_red,
            } => RedshiftFile {
                source: Some("fixed".into()),
                omega_red: Some(omega_red),
                delta_omega_red: Some(delta_omega_red),
            },
        };
        ConfigFile {
            seed: Some(SeedValue::Int(self.seed)),
            n_photons: Some(self.n_photons),
            model: Some(OneOrMany::One(self.model.as_str().into())),
            convention: Some(
                match self.convention {
                    MomentumConvention::Abraham => "abraham",
                    MomentumConvention::Minkowski => "minkowski",
                }
                .into(),
            ),
            phase_jitter_mode: Some(
                match self.phase_jitter_mode {
                    PhaseJitterMode::Analytic => "analytic",
                    PhaseJitterMode::Sampled => "sampled",
                }
                .into(),
            ),
            medium_n: Some(self.medium_n),
            screen_medium_n: Some(self.screen_medium_n),
            geometry: Some(GeometryFile {
                slit_separation: Some(g.slit_separation),
                slit_waist: Some(g.slit_waist),
                distance: Some(g.distance),
                wavelength: Some(g.wavelength),
                screen_halfwidth: Some(g.screen_halfwidth),
                bins: Some(g.bins as u64),
            }),
            plate: Some(PlateFile {
                resistance: Some(Ohms(p.resistance)),
                capacitance: Some(p.capacitance),
                temperature: Some(p.temperature),
                d_eff: Some(p.d_eff),
                pulse_duration: Some(p.pulse_duration),
                measurement_window: Some(p.measurement_window),
                gain: Some(p.gain),
                switch_on: Some(p.switch_on),
            }),
            redshift: Some(redshift),
        }
    }
}

/// On-disk schema. Enumerations are kept as strings so that every bad value
/// can be reported in one pass.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<SeedValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_photons: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_jitter_mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub medium_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen_medium_n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plate: Option<PlateFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redshift: Option<RedshiftFile>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub slit_separation: Option<f64>,
    pub slit_waist: Option<f64>,
    pub distance: Option<f64>,
    pub wavelength: Option<f64>,
    pub screen_halfwidth: Option<f64>,
    pub bins: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlateFile {
    pub resistance: Option<Ohms>,
    pub capacitance: Option<f64>,
    pub temperature: Option<f64>,
    pub d_eff: Option<f64>,
    pub pulse_duration: Option<f64>,
    pub measurement_window: Option<f64>,
    pub gain: Option<f64>,
    pub switch_on: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RedshiftFile {
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_red: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_omega_red: Option<f64>,
}

/// Resistance in ohms; `"inf"` (or a float infinity) is an open resistor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ohms(pub f64);

impl Serialize for Ohms {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_infinite() && self.0 > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Ohms {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Ohms(x)),
            Raw::Str(s) => parse_resistance(&s)
                .map(Ohms)
                .map_err(serde::de::Error::custom),
        }
    }
}

pub fn parse_resistance(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "open" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| format!("resistance: expected ohms or \"inf\", got `{s}`")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SeedValue {
    Int(u64),
    /// Decimal or `0x`-prefixed hexadecimal, for seeds beyond the TOML integer range.
    Str(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

fn parse_seed(v: &SeedValue) -> std::result::Result<u64, String> {
    match v {
        SeedValue::Int(x) => Ok(*x),
        SeedValue::Str(s) => {
            let s = s.trim();
            let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => s.parse::<u64>(),
            };
            parsed.map_err(|_| format!("seed: expected a 64-bit unsigned integer, got `{s}`"))
        }
    }
}

impl ConfigFile {
    /// Fill defaults and check every invariant.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        let mut errors = Vec::new();

        if let Some(seed) = &self.seed {
            match parse_seed(seed) {
                Ok(s) => cfg.seed = s,
                Err(e) => errors.push(e),
            }
        }
        if let Some(n) = self.n_photons {
            cfg.n_photons = n;
        }
        match &self.model {
            None => {}
            Some(OneOrMany::One(s)) => match s.parse() {
                Ok(m) => cfg.model = m,
                Err(e) => errors.push(e.to_string()),
            },
            Some(OneOrMany::Many(list)) if list.len() == 1 => match list[0].parse() {
                Ok(m) => cfg.model = m,
                Err(e) => errors.push(e.to_string()),
            },
            Some(OneOrMany::Many(_)) => errors.push("model: exactly one".into()),
        }
        if let Some(c) = &self.convention {
            match c.as_str() {
                "abraham" => cfg.convention = MomentumConvention::Abraham,
                "minkowski" => cfg.convention = MomentumConvention::Minkowski,
                other => errors.push(format!(
                    "convention: expected `abraham` or `minkowski`, got `{other}`"
                )),
            }
        }
        if let Some(m) = &self.phase_jitter_mode {
            match m.as_str() {
                "analytic" => cfg.phase_jitter_mode = PhaseJitterMode::Analytic,
                "sampled" => cfg.phase_jitter_mode = PhaseJitterMode::Sampled,
                other => errors.push(format!(
                    "phase_jitter_mode: expected `analytic` or `sampled`, got `{other}`"
                )),
            }
        }
        if let Some(n) = self.medium_n {
            cfg.medium_n = n;
        }
        if let Some(n) = self.screen_medium_n {
            cfg.screen_medium_n = n;
        }
        if let Some(g) = &self.geometry {
            let geo = &mut cfg.geometry;
            geo.slit_separation = g.slit_separation.unwrap_or(geo.slit_separation);
            geo.slit_waist = g.slit_waist.unwrap_or(geo.slit_waist);
            geo.distance = g.distance.unwrap_or(geo.distance);
            geo.wavelength = g.wavelength.unwrap_or(geo.wavelength);
            geo.screen_halfwidth = g.screen_halfwidth.unwrap_or(geo.screen_halfwidth);
            if let Some(b) = g.bins {
                geo.bins = b as usize;
            }
        }
        if let Some(p) = &self.plate {
            let pl = &mut cfg.plate;
            pl.resistance = p.resistance.map_or(pl.resistance, |r| r.0);
            pl.capacitance = p.capacitance.unwrap_or(pl.capacitance);
            pl.temperature = p.temperature.unwrap_or(pl.temperature);
            pl.d_eff = p.d_eff.unwrap_or(pl.d_eff);
            pl.pulse_duration = p.pulse_duration.unwrap_or(pl.pulse_duration);
            pl.measurement_window = p.measurement_window.unwrap_or(pl.measurement_window);
            pl.gain = p.gain.unwrap_or(pl.gain);
            pl.switch_on = p.switch_on.unwrap_or(pl.switch_on);
        }
        if let Some(r) = &self.redshift {
            match r.source.as_deref().unwrap_or("detector") {
                "detector" => {
                    if r.omega_red.is_some() || r.delta_omega_red.is_some() {
                        errors.push(
                            "redshift: omega_red and delta_omega_red require source = \"fixed\""
                                .into(),
                        );
                    }
                }
                "fixed" => {
                    cfg.redshift = RedshiftSource::Fixed {
                        omega_red: r.omega_red.unwrap_or(0.0),
                        delta_omega_red: r.delta_omega_red.unwrap_or(0.0),
                    }
                }
                other => errors.push(format!(
                    "redshift.source: expected `detector` or `fixed`, got `{other}`"
                )),
            }
        }

        errors.extend(cfg.violations());
        if errors.is_empty() {
            if cfg.geometry.slit_separation <= cfg.geometry.slit_waist {
                log::warn!(
                    "geometry: slit_separation does not exceed slit_waist; slits are not resolved"
                );
            }
            Ok(cfg)
        } else {
            Err(Error::Config(errors))
        }
    }
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let file: ConfigFile =
        toml::from_str(text).map_err(|e| Error::Syntax(e.message().to_string()))?;
    file.resolve()
}

pub fn parse_config_json(text: &str) -> Result<ExperimentConfig> {
    let file: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Syntax(e.to_string()))?;
    file.resolve()
}

/// Read a config file; `.json` files are parsed as JSON, anything else as TOML.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        parse_config_json(&text)
    } else {
        parse_config_str(&text)
    }
}

/// Parameters a sweep may vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Resistance,
    Distance,
    Gain,
    Temperature,
    Model,
}

impl SweepParameter {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "R" | "plate.resistance" => Ok(SweepParameter::Resistance),
            "L" | "geometry.distance" => Ok(SweepParameter::Distance),
            "g" | "plate.gain" => Ok(SweepParameter::Gain),
            "T" | "plate.temperature" => Ok(SweepParameter::Temperature),
            "model" => Ok(SweepParameter::Model),
            other => Err(Error::UnknownParameter(other.to_string())),
        }
    }

    pub fn path(self) -> &'static str {
        match self {
            SweepParameter::Resistance => "plate.resistance",
            SweepParameter::Distance => "geometry.distance",
            SweepParameter::Gain => "plate.gain",
            SweepParameter::Temperature => "plate.temperature",
            SweepParameter::Model => "model",
        }
    }

    /// Copy of `base` with this parameter set from its textual value.
    pub fn apply(self, base: &ExperimentConfig, value: &str) -> Result<ExperimentConfig> {
        let mut cfg = base.clone();
        let number = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(self.path(), format!("expected a number, got `{v}`")))
        };
        match self {
            SweepParameter::Resistance => {
                cfg.plate.resistance =
                    parse_resistance(value).map_err(|e| Error::domain(self.path(), e))?
            }
            SweepParameter::Distance => cfg.geometry.distance = number(value)?,
            SweepParameter::Gain => cfg.plate.gain = number(value)?,
            SweepParameter::Temperature => cfg.plate.temperature = number(value)?,
            SweepParameter::Model => cfg.model = value.trim().parse()?,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
