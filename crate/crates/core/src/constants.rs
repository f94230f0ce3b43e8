//! CODATA 2018 exact values. Not configurable.

use std::f64::consts::PI;

/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = H / (2.0 * PI);
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub c: f64,
    pub k_b: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    h: H,
    hbar: HBAR,
    c: C,
    k_b: K_B,
};
