//! Two-slit screen pattern under the competing decoherence models, Monte Carlo
//! landing, and fringe metrics.

pub mod experiment;
pub mod field;
pub mod pattern;
pub mod sampling;
pub mod visibility;

pub use experiment::{run_configured, run_experiment, ExperimentOutcome, RunStats};
pub use field::{two_slit_amplitude, BinnedField, SlitGeometry};
pub use pattern::{intensity_pattern, ModelKind, ScreenIntensity};
pub use sampling::{sample_positions, ScreenHistogram};
pub use visibility::{duality_check, estimate_visibility, DualityReport, FringeMetrics};
