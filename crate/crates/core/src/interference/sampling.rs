use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pattern::ScreenIntensity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenHistogram {
    /// Strictly increasing screen coordinates, m.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl ScreenHistogram {
    pub fn empty(edges: &[f64]) -> Self {
        ScreenHistogram {
            bin_edges: edges.to_vec(),
            counts: vec![0; edges.len().saturating_sub(1)],
            total: 0,
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    pub fn record(&mut self, bin: usize) {
        self.counts[bin] += 1;
        self.total += 1;
    }

    /// Bin holding `x`; positions outside the window land in the edge bins.
    pub fn bin_of(&self, x: f64) -> usize {
        let last = self.counts.len() - 1;
        let lo = self.bin_edges[0];
        let hi = self.bin_edges[last + 1];
        if x <= lo {
            return 0;
        }
        if x >= hi {
            return last;
        }
        self.bin_edges
            .partition_point(|&e| e <= x)
            .saturating_sub(1)
            .min(last)
    }

    /// Add another histogram over the same bins.
    pub fn merge(&mut self, other: &ScreenHistogram) {
        debug_assert_eq!(self.bin_edges, other.bin_edges);
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }
}

/// Inverse-CDF sampler over bins.
#[derive(Debug, Clone)]
pub struct BinSampler {
    cdf: Vec<f64>,
}

impl BinSampler {
    pub fn new(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::domain("intensity", "no bins"));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::domain("intensity", "values must be finite"));
        }
        if weights.iter().any(|w| *w < 0.0) {
            return Err(Error::domain("intensity", "values must be non-negative"));
        }
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        if acc.is_nan() || acc <= 0.0 {
            return Err(Error::domain("intensity", "empty support"));
        }
        for c in &mut cdf {
            *c /= acc;
        }
        // Pin the tail so u < 1 always resolves inside the support.
        let last_positive = weights.iter().rposition(|w| *w > 0.0).unwrap_or(0);
        for c in &mut cdf[last_positive..] {
            *c = 1.0;
        }
        Ok(BinSampler { cdf })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1)
    }
}

/// Draw `n` landing bins from a screen intensity.
pub fn sample_positions<R: Rng + ?Sized>(
    intensity: &ScreenIntensity,
    n: u64,
    rng: &mut R,
) -> Result<ScreenHistogram> {
    let sampler = BinSampler::new(&intensity.weights)?;
    let mut hist = ScreenHistogram::empty(&intensity.edges);
    for _ in 0..n {
        hist.record(sampler.sample(rng));
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::stats::chi_square_gof;

    fn uniform(bins: usize) -> ScreenIntensity {
        let edges = (0..=bins).map(|i| i as f64).collect();
        ScreenIntensity::from_raw(edges, vec![1.0; bins]).unwrap()
    }

    #[test]
    fn zero_draws_give_empty_histogram() {
        let h = sample_positions(&uniform(32), 0, &mut substream(0, "t", 0)).unwrap();
        assert_eq!(h.total, 0);
        assert!(h.counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn uniform_counts_stay_within_five_sigma() {
        let bins = 64;
        let n = 1_000_000u64;
        let h = sample_positions(&uniform(bins), n, &mut substream(11, "t", 0)).unwrap();
        assert_eq!(h.total, n);
        let p = 1.0 / bins as f64;
        let mean = n as f64 * p;
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        for &c in &h.counts {
            assert!((c as f64 - mean).abs() < 5.0 * sd, "{c} vs {mean}");
        }
        let t = chi_square_gof(&h.counts, &vec![p; bins], 5.0);
        assert!(t.p_value > 1e-4);
    }

    #[test]
    fn zero_weight_bins_are_never_drawn() {
        let edges = (0..=4).map(f64::from).collect();
        let s = ScreenIntensity::from_raw(edges, vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let h = sample_positions(&s, 10_000, &mut substream(3, "t", 0)).unwrap();
        assert_eq!(h.counts, vec![0, 10_000, 0, 0]);
    }

    #[test]
    fn bad_weights_are_rejected() {
        assert!(BinSampler::new(&[1.0, f64::NAN]).is_err());
        assert!(BinSampler::new(&[1.0, f64::INFINITY]).is_err());
        assert!(BinSampler::new(&[0.0, 0.0]).is_err());
        assert!(BinSampler::new(&[1.0, -0.5]).is_err());
    }

    #[test]
    fn bin_lookup_clamps_to_window() {
        let h = ScreenHistogram::empty(&[-1.0, 0.0, 1.0, 2.0]);
        assert_eq!(h.bin_of(-5.0), 0);
        assert_eq!(h.bin_of(-0.5), 0);
        assert_eq!(h.bin_of(0.0), 1);
        assert_eq!(h.bin_of(1.5), 2);
        assert_eq!(h.bin_of(9.0), 2);
    }

    #[test]
    fn same_stream_same_histogram() {
        let s = uniform(100);
        let a = sample_positions(&s, 5000, &mut substream(5, "t", 1)).unwrap();
        let b = sample_positions(&s, 5000, &mut substream(5, "t", 1)).unwrap();
        assert_eq!(a, b);
    }
}
