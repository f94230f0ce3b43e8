//! Monte Carlo model of a double-slit experiment in which each path carries a
//! piezoelectric plate that records the longitudinal momentum a photon leaves
//! at the plate surface.
//!
//! The crate compares two predictions for the screen pattern once the plates
//! are read out: the complementarity baseline, where fringe contrast falls as
//! `sqrt(1 - D²)`, and the local-passive hypothesis, where only the readout
//! redshift jitter can wash the fringes out.

pub mod bohm;
pub mod cli;
pub mod config;
pub mod constants;
pub mod detector;
pub mod error;
pub mod interference;
pub mod optics;
pub mod output;
pub mod rng;
pub mod stats;
pub mod uncertainty;

pub use error::{Error, Result};
