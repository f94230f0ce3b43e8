//! Energy-flow streamlines of the unmeasured two-slit field.
//!
//! The paraxial streamline slope is `dx/dz = Im(ψ* ∂ψ/∂x) / (k |ψ|²)`. The
//! near field spans only a Rayleigh range (tens of µm for micron slits) while
//! the screen sits meters away, so trajectories are integrated in the beam's
//! own coordinates: the Gouy angle `u = atan(z / z_R)` and the scaled
//! transverse position `ξ = x / sqrt(1 + (z/z_R)²)`. For slits at `±c` the
//! field reduces to `e^{a} + e^{-a}` with `a = κ ξ e^{-iu}`, `κ = 2c/w²`, and
//!
//! ```text
//! dξ/du = c (cos u · sin s · sech t − sin u · tanh t) / (1 + cos s · sech t)
//! t = 2κξ cos u,   s = −2κξ sin u
//! ```
//!
//! Output samples sit on a uniform `u` grid. Each grid step is an RK4 step
//! refined by step doubling until the local error in `ξ` is below
//! `LOCAL_TOLERANCE · w`; trajectories that skirt a near-node need the extra
//! resolution.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::{ScreenHistogram, SlitGeometry};
use crate::optics::Path;

/// Default relative intensity floor below which the slope is undefined.
pub const DEFAULT_DENSITY_FLOOR: f64 = 1e-300;

/// Default integration step as a fraction of the slit-to-screen distance.
pub const DEFAULT_STEPS: usize = 4096;

const MAX_STEPS: usize = 1 << 26;

/// Local error bound per grid step, in units of the slit waist.
const LOCAL_TOLERANCE: f64 = 1e-13;
const MAX_REFINE: u32 = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `(z, x)` in meters, `z` strictly increasing from 0 to L.
    pub samples: Vec<(f64, f64)>,
    pub origin_slit: Path,
}

impl Trajectory {
    pub fn endpoint(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.1)
    }
}

#[derive(Debug, Clone, Copy)]
struct Streamlines {
    zr: f64,
    half_separation: f64,
    kappa: f64,
    floor: f64,
}

impl Streamlines {
    fn new(geometry: &SlitGeometry, floor: f64) -> Self {
        let c = 0.5 * geometry.slit_separation;
        let w = geometry.slit_waist;
        Streamlines {
            zr: geometry.rayleigh_range(),
            half_separation: c,
            kappa: 2.0 * c / (w * w),
            floor,
        }
    }

    fn gouy_rate(&self, xi: f64, u: f64) -> Result<f64> {
        let (su, cu) = u.sin_cos();
        let t = 2.0 * self.kappa * xi * cu;
        let (ss, cs) = (-2.0 * self.kappa * xi * su).sin_cos();
        let m = (-t.abs()).exp();
        let sech = 2.0 * m / (1.0 + m * m);
        let tanh = ((1.0 - m * m) / (1.0 + m * m)).copysign(t);
        // |ψ|² and (Σ|ψ_j|)², both divided by 2 cosh t
        let density = 1.0 + cs * sech;
        if density < self.floor * (1.0 + sech) {
            return Err(Error::Singularity {
                x: xi / cu,
                z: self.zr * su / cu,
            });
        }
        Ok(self.half_separation * (cu * ss * sech - su * tanh) / density)
    }

    fn slope(&self, x: f64, z: f64) -> Result<f64> {
        let u = (z / self.zr).atan();
        let (su, cu) = u.sin_cos();
        let rate = self.gouy_rate(x * cu, u)?;
        Ok((rate + x * su) * cu / self.zr)
    }

    fn rk4(&self, xi: f64, k1: f64, u: f64, h: f64) -> Result<f64> {
        let k2 = self.gouy_rate(xi + 0.5 * h * k1, u + 0.5 * h)?;
        let k3 = self.gouy_rate(xi + 0.5 * h * k2, u + 0.5 * h)?;
        let k4 = self.gouy_rate(xi + h * k3, u + h)?;
        Ok(xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
    }

    /// One grid step, halved recursively until the doubling estimate is within `tol`.
    fn advance(&self, xi: f64, u: f64, h: f64, tol: f64, depth: u32) -> Result<f64> {
        let k1 = self.gouy_rate(xi, u)?;
        let full = self.rk4(xi, k1, u, h)?;
        let mid = self.rk4(xi, k1, u, 0.5 * h)?;
        let v = u + 0.5 * h;
        let two = self.rk4(mid, self.gouy_rate(mid, v)?, v, 0.5 * h)?;
        let err = two - full;
        if err.abs() <= tol || depth >= MAX_REFINE {
            return Ok(two + err / 15.0);
        }
        let mid = self.advance(xi, u, 0.5 * h, 0.5 * tol, depth + 1)?;
        self.advance(mid, v, 0.5 * h, 0.5 * tol, depth + 1)
    }
}

/// Streamline slope `dx/dz` at `(x, z)`.
pub fn velocity_field(x: f64, z: f64, geometry: &SlitGeometry) -> Result<f64> {
    velocity_field_with_floor(x, z, geometry, DEFAULT_DENSITY_FLOOR)
}

pub fn velocity_field_with_floor(
    x: f64,
    z: f64,
    geometry: &SlitGeometry,
    floor: f64,
) -> Result<f64> {
    Streamlines::new(geometry, floor).slope(x, z)
}

/// Number of Gouy-angle steps for a nominal z step.
pub fn steps_for(step: f64, geometry: &SlitGeometry) -> Result<usize> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::domain("step", format!("must be > 0, got {step}")));
    }
    let n = (geometry.distance / step).ceil();
    if n > MAX_STEPS as f64 {
        return Err(Error::domain("step", "step underflow"));
    }
    Ok((n as usize).max(1))
}

/// Trace the streamline launched at `x0` on the slit plane. `step` is the
/// nominal z step; the integrator takes `ceil(L / step)` equal Gouy-angle steps.
pub fn integrate_trajectory(x0: f64, geometry: &SlitGeometry, step: f64) -> Result<Trajectory> {
    let steps = steps_for(step, geometry)?;
    integrate_steps(x0, geometry, steps, DEFAULT_DENSITY_FLOOR)
}

pub fn integrate_steps(
    x0: f64,
    geometry: &SlitGeometry,
    steps: usize,
    floor: f64,
) -> Result<Trajectory> {
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push((0.0, x0));
    march(x0, geometry, steps, floor, |z, x| samples.push((z, x)))?;
    Ok(Trajectory {
        samples,
        origin_slit: origin(x0),
    })
}

/// Screen position of the streamline launched at `x0`, without keeping the polyline.
pub fn landing_point(x0: f64, geometry: &SlitGeometry, steps: usize, floor: f64) -> Result<f64> {
    let mut last = x0;
    march(x0, geometry, steps, floor, |_, x| last = x)?;
    Ok(last)
}

fn origin(x0: f64) -> Path {
    if x0 >= 0.0 {
        Path::SlitOne
    } else {
        Path::SlitTwo
    }
}

fn march(
    x0: f64,
    geometry: &SlitGeometry,
    steps: usize,
    floor: f64,
    mut emit: impl FnMut(f64, f64),
) -> Result<()> {
    if !x0.is_finite() {
        return Err(Error::domain("x0", "must be finite"));
    }
    if steps == 0 || steps > MAX_STEPS {
        return Err(Error::domain(
            "steps",
            format!("must be in 1..={MAX_STEPS}, got {steps}"),
        ));
    }
    let field = Streamlines::new(geometry, floor);
    let zr = field.zr;
    let u_end = (geometry.distance / zr).atan();
    let h = u_end / steps as f64;
    let tol = LOCAL_TOLERANCE * geometry.slit_waist;

    let mut xi = x0;
    for i in 0..steps {
        let u = i as f64 * h;
        xi = field.advance(xi, u, h, tol, 0)?;
        if !xi.is_finite() {
            return Err(Error::Singularity {
                x: xi,
                z: zr * (u + h).tan(),
            });
        }
        if i + 1 == steps {
            let z = geometry.distance;
            emit(z, xi * (1.0 + (z / zr).powi(2)).sqrt());
        } else {
            let v = u + h;
            emit(zr * v.tan(), xi / v.cos());
        }
    }
    Ok(())
}

/// Draw a launch point from `|ψ(x, 0)|²` by rejection from the two-Gaussian envelope.
pub fn sample_launch<R: Rng + ?Sized>(geometry: &SlitGeometry, rng: &mut R) -> f64 {
    let (c1, c2) = geometry.slit_centers();
    let w = geometry.slit_waist;
    let spread = Normal::new(0.0, 0.5 * w).expect("waist is positive");
    loop {
        let center = if rng.random_bool(0.5) { c1 } else { c2 };
        let x = center + spread.sample(rng);
        let a = (-(x - c1).powi(2) / (w * w)).exp();
        let b = (-(x - c2).powi(2) / (w * w)).exp();
        let u: f64 = rng.random();
        if u * 2.0 * (a * a + b * b) < (a + b) * (a + b) {
            return x;
        }
    }
}

fn launches<R: Rng + ?Sized>(n: usize, geometry: &SlitGeometry, rng: &mut R) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("n", "must be ≥ 1"));
    }
    geometry.validate()?;
    Ok((0..n).map(|_| sample_launch(geometry, rng)).collect())
}

/// `n` trajectories launched from the slit-plane density, and their landing histogram.
pub fn trajectory_ensemble<R: Rng + ?Sized>(
    n: usize,
    geometry: &SlitGeometry,
    step: f64,
    rng: &mut R,
) -> Result<(Vec<Trajectory>, ScreenHistogram)> {
    let steps = steps_for(step, geometry)?;
    let trajectories = launches(n, geometry, rng)?
        .par_iter()
        .map(|&x0| integrate_steps(x0, geometry, steps, DEFAULT_DENSITY_FLOOR))
        .collect::<Result<Vec<_>>>()?;
    let ends: Vec<f64> = trajectories.iter().map(Trajectory::endpoint).collect();
    Ok((trajectories, landing_histogram(&ends, geometry)))
}

/// Landing histogram of `n` launches from the slit-plane density.
pub fn landing_ensemble<R: Rng + ?Sized>(
    n: usize,
    geometry: &SlitGeometry,
    step: f64,
    rng: &mut R,
) -> Result<ScreenHistogram> {
    let steps = steps_for(step, geometry)?;
    let ends = launches(n, geometry, rng)?
        .par_iter()
        .map(|&x0| landing_point(x0, geometry, steps, DEFAULT_DENSITY_FLOOR))
        .collect::<Result<Vec<_>>>()?;
    Ok(landing_histogram(&ends, geometry))
}

fn landing_histogram(ends: &[f64], geometry: &SlitGeometry) -> ScreenHistogram {
    let mut hist = ScreenHistogram::empty(&geometry.bin_edges());
    for &x in ends {
        let bin = hist.bin_of(x);
        hist.record(bin);
    }
    hist
}
