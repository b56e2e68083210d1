//! Time-domain Monte-Carlo validation of the analytic spectra.
//!
//! Records are complex baseband series so that spectra which differ between
//! positive and negative frequency can be represented. Every density is a
//! two-sided density per unit of frequency `f` (cycles per time unit); since
//! `W(s) = ∫ F(2πf) e^{2πifs} df`, the density at `f` equals the model
//! response evaluated at angular frequency `ν = 2πf`. A unit-variance white
//! record sampled at `fs` therefore reads `1/fs` in every bin.

mod compare;
mod rng;
mod synth;
mod welch;
mod witness;

pub use compare::SpectrumComparison;
pub use rng::{SeedStreams, StreamTag};
pub use synth::{synthesize_field_pair, synthesize_from_density, synthesize_photocurrent, SpectralMatrix};
pub use welch::{hann_window, welch_cross_psd, welch_psd, CrossPsdEstimate, PsdEstimate};
pub use witness::{monte_carlo_witness, WitnessEstimate};

use num_complex::Complex64;

use crate::error::{require_positive, Error, Result};

/// A complex baseband record.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub sample_rate: f64,
    pub samples: Vec<Complex64>,
    pub seed: u64,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Mean of `|x|²`.
    pub fn mean_power(&self) -> f64 {
        pairwise_sum(&self.samples.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>()) / self.len() as f64
    }
}

/// Field records at the two superposed locations.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesPair {
    pub first: TimeSeries,
    pub second: TimeSeries,
}

impl TimeSeriesPair {
    pub fn n_samples(&self) -> usize {
        self.first.len()
    }

    pub fn sample_rate(&self) -> f64 {
        self.first.sample_rate
    }
}

/// Record-length and rate settings shared by the synthesizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordSpec {
    pub n_samples: usize,
    pub sample_rate: f64,
    pub seed: u64,
}

impl RecordSpec {
    pub fn new(n_samples: usize, sample_rate: f64, seed: u64) -> Result<Self> {
        require_power_of_two("n_samples", n_samples)?;
        require_positive("sample_rate", sample_rate)?;
        Ok(Self {
            n_samples,
            sample_rate,
            seed,
        })
    }
}

pub(crate) fn require_power_of_two(name: &'static str, value: usize) -> Result<usize> {
    if value.is_power_of_two() {
        Ok(value)
    } else {
        Err(Error::NotPowerOfTwo { name, value })
    }
}

/// Frequency of DFT bin `k` for an `n`-point transform, on `[-fs/2, fs/2)`.
pub fn bin_frequency(k: usize, n: usize, sample_rate: f64) -> f64 {
    let signed = if k < n / 2 { k as f64 } else { k as f64 - n as f64 };
    signed * sample_rate / n as f64
}

/// Deterministic pairwise (tree) summation.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bin_frequencies_are_signed() {
        assert_eq!(bin_frequency(0, 8, 8.0), 0.0);
        assert_eq!(bin_frequency(3, 8, 8.0), 3.0);
        assert_eq!(bin_frequency(4, 8, 8.0), -4.0);
        assert_eq!(bin_frequency(7, 8, 8.0), -1.0);
    }

    #[test]
    fn record_spec_validation() {
        assert!(RecordSpec::new(1000, 1.0, 0).is_err());
        assert!(RecordSpec::new(1024, 0.0, 0).is_err());
        assert!(RecordSpec::new(1024, 2.0, 0).is_ok());
    }

    #[test]
    fn pairwise_sum_exact_on_integers() {
        let v: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 49_995_000.0);
    }
}
