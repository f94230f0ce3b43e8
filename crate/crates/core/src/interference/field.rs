use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::vacuum_wave_number;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    /// Center-to-center slit separation, m.
    pub slit_separation: f64,
    /// 1/e amplitude half-width of each Gaussian slit, m.
    pub slit_waist: f64,
    /// Plate-to-screen distance, m.
    pub distance: f64,
    /// Vacuum wavelength, m.
    pub wavelength: f64,
    pub screen_halfwidth: f64,
    pub bins: usize,
}

impl Default for SlitGeometry {
    fn default() -> Self {
        SlitGeometry {
            slit_separation: 10e-6,
            slit_waist: 2e-6,
            distance: 1.0,
            wavelength: 630e-9,
            screen_halfwidth: 0.5,
            bins: 1024,
        }
    }
}

impl SlitGeometry {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        for (name, x) in [
            ("slit_separation", self.slit_separation),
            ("slit_waist", self.slit_waist),
            ("distance", self.distance),
            ("wavelength", self.wavelength),
            ("screen_halfwidth", self.screen_halfwidth),
        ] {
            if !(x.is_finite() && x > 0.0) {
                v.push(format!("{name}: must be > 0, got {x}"));
            }
        }
        if self.bins < 16 {
            v.push(format!("bins: must be ≥ 16, got {}", self.bins));
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(Error::domain("geometry", v.join("; ")));
        }
        if self.slit_separation <= self.slit_waist {
            log::warn!(
                "slit separation {} m does not exceed the waist {} m; slits overlap",
                self.slit_separation,
                self.slit_waist
            );
        }
        Ok(())
    }

    pub fn wave_number(&self) -> f64 {
        vacuum_wave_number(self.wavelength)
    }

    /// Rayleigh range of a single slit beam.
    pub fn rayleigh_range(&self) -> f64 {
        0.5 * self.wave_number() * self.slit_waist * self.slit_waist
    }

    /// Single-beam 1/e amplitude half-width at distance `z`.
    pub fn beam_width(&self, z: f64) -> f64 {
        let zr = self.rayleigh_range();
        self.slit_waist * (1.0 + (z / zr).powi(2)).sqrt()
    }

    /// Geometric fringe frequency on the screen, cycles per meter.
    pub fn fringe_frequency(&self) -> f64 {
        self.slit_separation / (self.wavelength * self.distance)
    }

    pub fn bin_edges(&self) -> Vec<f64> {
        let width = 2.0 * self.screen_halfwidth / self.bins as f64;
        (0..=self.bins)
            .map(|i| -self.screen_halfwidth + i as f64 * width)
            .collect()
    }

    /// Slit centers: `SlitOne` at `+x1/2`, `SlitTwo` at `-x1/2`.
    pub fn slit_centers(&self) -> (f64, f64) {
        (0.5 * self.slit_separation, -0.5 * self.slit_separation)
    }
}

/// Paraxial Gaussian beam launched with unit peak amplitude at `center`,
/// evaluated at distance `z` behind the slit plane (carrier `e^{ikz}` dropped).
///
/// `psi = sqrt(q0/q) · exp(i k (x - c)² / 2q)` with `q = z - i z_R`.
pub fn gaussian_beam(x: f64, center: f64, z: f64, k: f64, rayleigh: f64) -> Complex64 {
    let q = Complex64::new(z, -rayleigh);
    let q0 = Complex64::new(0.0, -rayleigh);
    let d = x - center;
    (q0 / q).sqrt() * (Complex64::new(0.0, 0.5 * k * d * d) / q).exp()
}

/// `d psi / dx` of [`gaussian_beam`].
pub fn gaussian_beam_dx(
    psi: Complex64,
    x: f64,
    center: f64,
    z: f64,
    k: f64,
    rayleigh: f64,
) -> Complex64 {
    let q = Complex64::new(z, -rayleigh);
    psi * Complex64::new(0.0, k * (x - center)) / q
}

/// Both slit fields at `(x, z)`.
pub fn slit_fields(x: f64, z: f64, geometry: &SlitGeometry) -> (Complex64, Complex64) {
    let k = geometry.wave_number();
    let zr = geometry.rayleigh_range();
    let (c1, c2) = geometry.slit_centers();
    (
        gaussian_beam(x, c1, z, k, zr),
        gaussian_beam(x, c2, z, k, zr),
    )
}

/// Both slit fields on the screen.
pub fn two_slit_amplitude(x: f64, geometry: &SlitGeometry) -> (Complex64, Complex64) {
    slit_fields(x, geometry.distance, geometry)
}

// 5-point Gauss–Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Bin averages of `|psi1|²`, `|psi2|²` and `psi1·conj(psi2)` over the screen.
#[derive(Debug, Clone)]
pub struct BinnedField {
    pub edges: Vec<f64>,
    pub slit_one: Vec<f64>,
    pub slit_two: Vec<f64>,
    pub cross: Vec<Complex64>,
}

impl BinnedField {
    pub fn new(geometry: &SlitGeometry) -> Self {
        let edges = geometry.bin_edges();
        let n = geometry.bins;
        let mut slit_one = Vec::with_capacity(n);
        let mut slit_two = Vec::with_capacity(n);
        let mut cross = Vec::with_capacity(n);
        for w in edges.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            let (mut a, mut b, mut c) = (0.0, 0.0, Complex64::new(0.0, 0.0));
            for (t, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
                let (p1, p2) = two_slit_amplitude(mid + half * t, geometry);
                a += wt * p1.norm_sqr();
                b += wt * p2.norm_sqr();
                c += wt * p1 * p2.conj();
            }
            slit_one.push(0.5 * a);
            slit_two.push(0.5 * b);
            cross.push(0.5 * c);
        }
        BinnedField {
            edges,
            slit_one,
            slit_two,
            cross,
        }
    }

    pub fn bins(&self) -> usize {
        self.slit_one.len()
    }

    /// Unnormalized `|psi1|² + |psi2|² + 2·coherence·Re(psi1 conj(psi2) e^{i phase})` per bin.
    pub fn raw_intensity(&self, coherence: f64, phase: f64) -> Vec<f64> {
        let rot = Complex64::from_polar(1.0, phase);
        self.slit_one
            .iter()
            .zip(&self.slit_two)
            .zip(&self.cross)
            .map(|((a, b), c)| (a + b + 2.0 * coherence * (c * rot).re).max(0.0))
            .collect()
    }

    /// `|psi1|² + |psi2|²` per bin; bounds every [`raw_intensity`](Self::raw_intensity) by a factor 2.
    pub fn envelope(&self) -> Vec<f64> {
        self.slit_one
            .iter()
            .zip(&self.slit_two)
            .map(|(a, b)| a + b)
            .collect()
    }
}
