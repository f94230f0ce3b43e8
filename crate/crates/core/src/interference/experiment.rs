//! Monte Carlo pipeline: path choice, plate impulse, readout, redshift, landing.
//!
//! Photons are processed in fixed-size batches. Batch `b` draws from the
//! substream `(seed, "photons", b)`, so results do not depend on how many
//! workers execute the batches.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::BinnedField;
use super::pattern::{coherence, intensity_from_field, ModelKind, ScreenIntensity};
use super::sampling::{BinSampler, ScreenHistogram};
use super::visibility::{
    analytic_visibility, estimate_visibility, max_min_visibility, FringeMetrics,
};
use crate::config::{ExperimentConfig, PhaseJitterMode, RedshiftSource};
use crate::detector::{detect, expected_outcome, DetectionOutcome};
use crate::error::{Error, Result};
use crate::optics::{
    apply_redshift, momentum_transfer, propagation_phase, MediumSpec, Path, PhotonState,
};
use crate::rng::substream;

pub const PHOTON_BATCH: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub n_photons: u64,
    pub mean_snr: f64,
    pub mean_distinguishability: f64,
    /// Mean realized redshift `ω1 - ω2`, rad/s.
    pub mean_omega_red: f64,
    /// Mean redshift and jitter std that set the screen phase, rad/s.
    pub omega_red: f64,
    pub delta_omega_red: f64,
    pub delta_phi_mean: f64,
    pub sigma_phi: f64,
    /// Share of photons whose path was read out correctly; absent with the switch off.
    pub correct_inference_rate: Option<f64>,
    pub undetermined: u64,
    pub analytic_visibility: f64,
    pub max_min_visibility: f64,
    /// Entry-face impulse on the plate, kg·m/s.
    pub plate_impulse: f64,
    pub discharge_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub histogram: ScreenHistogram,
    pub metrics: FringeMetrics,
    pub stats: RunStats,
    /// Closed-form intensity for the run's model and phase parameters.
    pub intensity: ScreenIntensity,
}

#[derive(Debug, Clone, Default)]
struct BatchTally {
    counts: Vec<u64>,
    snr: f64,
    distinguishability: f64,
    omega_red: f64,
    correct: u64,
    undetermined: u64,
}

struct Pipeline<'a> {
    cfg: &'a ExperimentConfig,
    expected: DetectionOutcome,
    crossing: crate::optics::BoundaryCrossing,
    omega_red: f64,
    delta_omega_red: f64,
    screen: MediumSpec,
    field: &'a BinnedField,
    landing: Landing,
}

enum Landing {
    Analytic(BinSampler),
    Sampled {
        envelope: BinSampler,
        envelope_weights: Vec<f64>,
        which_way: f64,
    },
}

impl Pipeline<'_> {
    fn run_batch(&self, batch: u64, start: u64, len: u64) -> Result<BatchTally> {
        let mut rng = substream(self.cfg.seed, "photons", batch);
        let mut tally = BatchTally {
            counts: vec![0; self.field.bins()],
            ..BatchTally::default()
        };
        for i in 0..len {
            self.photon(&mut rng, &mut tally)
                .map_err(|e| Error::Photon {
                    index: start + i,
                    source: Box::new(e),
                })?;
        }
        Ok(tally)
    }

    fn photon<R: Rng>(&self, rng: &mut R, tally: &mut BatchTally) -> Result<()> {
        let path = if rng.random_bool(0.5) {
            Path::SlitOne
        } else {
            Path::SlitTwo
        };
        let photon = PhotonState::new(self.cfg.geometry.wavelength, path)?;
        let outcome = detect(&photon, &self.crossing, &self.cfg.plate, rng);

        let jitter = if self.delta_omega_red > 0.0 {
            self.delta_omega_red * rng.sample::<f64, _>(StandardNormal)
        } else {
            0.0
        };
        let mut photon = apply_redshift(&photon, self.omega_red, jitter)?;
        photon.phase = propagation_phase(photon.omega, self.cfg.geometry.distance, &self.screen)?;

        tally.snr += outcome.snr;
        tally.distinguishability += outcome.distinguishability;
        tally.omega_red += photon.ledger.omega1 - photon.ledger.omega2;
        if self.cfg.plate.switch_on {
            if outcome.is_correct(path) {
                tally.correct += 1;
            } else if outcome.inferred_path == crate::detector::InferredPath::Undetermined {
                tally.undetermined += 1;
            }
        }

        let bin = match &self.landing {
            Landing::Analytic(sampler) => sampler.sample(rng),
            Landing::Sampled {
                envelope,
                envelope_weights,
                which_way,
            } => {
                // Phase lag of this photon relative to an unredshifted one.
                let shift = self.cfg.screen_medium_n
                    * (self.omega_red + jitter)
                    * self.cfg.geometry.distance
                    / crate::constants::C;
                let rot = num_complex::Complex64::from_polar(1.0, shift);
                loop {
                    let b = envelope.sample(rng);
                    let local =
                        envelope_weights[b] + 2.0 * which_way * (self.field.cross[b] * rot).re;
                    let u: f64 = rng.random();
                    if u * 2.0 * envelope_weights[b] < local {
                        break b;
                    }
                }
            }
        };
        tally.counts[bin] += 1;
        Ok(())
    }
}

/// Run `n_photons` through the configured apparatus with root seed `seed`.
pub fn run_experiment(
    config: &ExperimentConfig,
    n_photons: u64,
    seed: u64,
) -> Result<ExperimentOutcome> {
    config.validate()?;
    config.geometry.validate()?;
    if n_photons == 0 {
        return Err(Error::domain("n_photons", "must be ≥ 1"));
    }
    let cfg = ExperimentConfig {
        n_photons,
        seed,
        ..config.clone()
    };
    let geometry = &cfg.geometry;

    let plate = MediumSpec::new("plate", cfg.medium_n, 0.0)?;
    let crossing = momentum_transfer(
        &MediumSpec::vacuum(),
        &plate,
        geometry.wavelength,
        cfg.convention,
    )?;
    let expected = expected_outcome(&crossing, &cfg.plate);
    let (omega_red, delta_omega_red) = match cfg.redshift {
        RedshiftSource::Detector => (expected.omega_red, expected.delta_omega_red),
        RedshiftSource::Fixed {
            omega_red,
            delta_omega_red,
        } => (omega_red, delta_omega_red),
    };
    let screen = MediumSpec::new("screen", cfg.screen_medium_n, geometry.distance)?;
    let delta_phi_mean = propagation_phase(omega_red, geometry.distance, &screen)?;
    let sigma_phi = propagation_phase(delta_omega_red, geometry.distance, &screen)?;

    let field = BinnedField::new(geometry);
    let d = expected.distinguishability;
    let intensity = intensity_from_field(&field, cfg.model, d, sigma_phi, delta_phi_mean)?;
    let baseline = intensity_from_field(&field, cfg.model, 0.0, 0.0, 0.0)?;

    let landing = match cfg.phase_jitter_mode {
        PhaseJitterMode::Analytic => Landing::Analytic(BinSampler::new(&intensity.weights)?),
        PhaseJitterMode::Sampled => {
            let envelope_weights = field.envelope();
            Landing::Sampled {
                envelope: BinSampler::new(&envelope_weights)?,
                envelope_weights,
                which_way: coherence(cfg.model, d, 0.0),
            }
        }
    };
    let pipeline = Pipeline {
        cfg: &cfg,
        expected,
        crossing,
        omega_red,
        delta_omega_red,
        screen,
        field: &field,
        landing,
    };

    let n_batches = n_photons.div_ceil(PHOTON_BATCH);
    let tallies: Vec<Result<BatchTally>> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let start = b * PHOTON_BATCH;
            let len = PHOTON_BATCH.min(n_photons - start);
            pipeline.run_batch(b, start, len)
        })
        .collect();

    let mut histogram = ScreenHistogram::empty(&field.edges);
    let mut sum = BatchTally::default();
    for tally in tallies {
        let t = tally?;
        for (c, x) in histogram.counts.iter_mut().zip(&t.counts) {
            *c += x;
        }
        sum.snr += t.snr;
        sum.distinguishability += t.distinguishability;
        sum.omega_red += t.omega_red;
        sum.correct += t.correct;
        sum.undetermined += t.undetermined;
    }
    histogram.total = histogram.counts.iter().sum();
    debug_assert_eq!(histogram.total, n_photons);

    let n = n_photons as f64;
    let mean_d = sum.distinguishability / n;
    let visibility = estimate_visibility(&histogram, geometry)?;
    let weights: Vec<f64> = histogram.counts.iter().map(|&c| c as f64).collect();
    let stats = RunStats {
        n_photons,
        mean_snr: sum.snr / n,
        mean_distinguishability: mean_d,
        mean_omega_red: sum.omega_red / n,
        omega_red,
        delta_omega_red,
        delta_phi_mean,
        sigma_phi,
        correct_inference_rate: cfg.plate.switch_on.then(|| sum.correct as f64 / n),
        undetermined: sum.undetermined,
        analytic_visibility: analytic_visibility(&intensity, geometry),
        max_min_visibility: max_min_visibility(&histogram.centers(), &weights, geometry),
        plate_impulse: crossing.p_m,
        discharge_fraction: pipeline.expected.eta,
    };
    Ok(ExperimentOutcome {
        metrics: FringeMetrics::new(visibility, mean_d, analytic_visibility(&baseline, geometry)),
        histogram,
        stats,
        intensity,
    })
}

/// Run the config's own photon count and seed.
pub fn run_configured(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    run_experiment(config, config.n_photons, config.seed)
}

/// Baseline-visibility attenuation predicted for a model.
pub fn predicted_visibility(model: ModelKind, d: f64, sigma_phi: f64, baseline: f64) -> f64 {
    coherence(model, d, sigma_phi) * baseline
}
