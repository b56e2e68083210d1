use std::f64::consts::PI;

use super::PsdEstimate;

/// Per-bin comparison of an estimated spectrum against an analytic target.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumComparison {
    /// Angular frequency of each bin.
    pub nu: Vec<f64>,
    pub estimate: Vec<f64>,
    pub analytic: Vec<f64>,
    pub std_error: Vec<f64>,
    pub z: Vec<f64>,
}

impl SpectrumComparison {
    /// Compares a Welch estimate with `target(ν)`, taking standard errors from
    /// the target so that z-scores are not biased by the estimate's own noise.
    pub fn from_estimate<F: Fn(f64) -> f64>(est: &PsdEstimate, target: F) -> Self {
        let nu = est.angular_frequencies();
        let analytic: Vec<f64> = nu.iter().map(|&v| target(v)).collect();
        let std_error: Vec<f64> = analytic.iter().map(|&a| est.std_error_for(a)).collect();
        Self::assemble(nu, est.density.clone(), analytic, std_error)
    }

    pub(crate) fn assemble(nu: Vec<f64>, estimate: Vec<f64>, analytic: Vec<f64>, std_error: Vec<f64>) -> Self {
        let z = estimate
            .iter()
            .zip(&analytic)
            .zip(&std_error)
            .map(|((e, a), s)| if *s > 0.0 { (e - a) / s } else { 0.0 })
            .collect();
        Self {
            nu,
            estimate,
            analytic,
            std_error,
            z,
        }
    }

    /// Indices of bins with `lo <= ν < hi`, dropping `guard_bins` bins next to
    /// `ν = 0` on either side (the analytic spectra may jump there and window
    /// leakage biases the nearest bins).
    pub fn band(&self, lo: f64, hi: f64, guard_bins: usize) -> Vec<usize> {
        let spacing = if self.nu.len() > 1 {
            (self.nu[1] - self.nu[0]).abs()
        } else {
            0.0
        };
        let guard = spacing * (guard_bins as f64 + 0.5);
        (0..self.nu.len())
            .filter(|&k| {
                let v = self.nu[k];
                v >= lo && v < hi && v.abs() > guard
            })
            .collect()
    }

    /// `√(mean((est - target)² / target²))` over `bins`.
    pub fn rms_relative_error(&self, bins: &[usize]) -> f64 {
        let sum: f64 = bins
            .iter()
            .map(|&k| {
                let rel = (self.estimate[k] - self.analytic[k]) / self.analytic[k];
                rel * rel
            })
            .sum();
        (sum / bins.len() as f64).sqrt()
    }

    pub fn fraction_beyond(&self, bins: &[usize], threshold: f64) -> f64 {
        let count = bins.iter().filter(|&&k| self.z[k].abs() > threshold).count();
        count as f64 / bins.len() as f64
    }

    pub fn max_abs_z(&self, bins: &[usize]) -> f64 {
        bins.iter().map(|&k| self.z[k].abs()).fold(0.0, f64::max)
    }

    /// χ² of the bins and its number of degrees of freedom.
    pub fn chi_squared(&self, bins: &[usize]) -> (f64, usize) {
        (bins.iter().map(|&k| self.z[k] * self.z[k]).sum(), bins.len())
    }

    pub fn frequency_hz(&self, k: usize) -> f64 {
        self.nu[k] / (2.0 * PI)
    }
}
