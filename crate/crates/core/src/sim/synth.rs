//! Frequency-domain synthesis of Gaussian records with prescribed spectra.
//!
//! Bin `k` of an `N`-point record at rate `fs` receives
//! `X_k = L_k z_k √(fs/N)` with `z_k` circular standard normals and
//! `L_k L_kᵀ` the target (cross-)spectral density; an unnormalized inverse DFT
//! then gives samples whose periodogram expectation is the target density.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::rng::{complex_normal, SeedStreams, StreamTag};
use super::{bin_frequency, RecordSpec, TimeSeries, TimeSeriesPair};
use crate::detection::PsdModel;
use crate::error::{Error, Result};
use crate::response::ResponseModel;

/// Bins per RNG stream block.
const BLOCK: usize = 4096;
const PSD_TOLERANCE: f64 = 1e-12;

/// Real-symmetric 2×2 cross-spectral density of the field at the two
/// locations, one matrix per DFT bin (bin order, not shifted).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    sample_rate: f64,
    entries: Vec<[[f64; 2]; 2]>,
}

impl SpectralMatrix {
    /// Evaluates `[[F_d, F_od], [F_od, F_d]]` at `ν = 2π f_k` for every bin.
    pub fn from_model(model: &ResponseModel, n_bins: usize, sample_rate: f64) -> Self {
        let entries = (0..n_bins)
            .map(|k| model.spectral_matrix(2.0 * PI * bin_frequency(k, n_bins, sample_rate)))
            .collect();
        Self { sample_rate, entries }
    }

    /// Arbitrary per-bin matrices; symmetry is enforced by using the upper
    /// triangle.
    pub fn from_entries(entries: Vec<[[f64; 2]; 2]>, sample_rate: f64) -> Self {
        Self { sample_rate, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn entry(&self, bin: usize) -> [[f64; 2]; 2] {
        self.entries[bin]
    }

    /// Smallest eigenvalue over all bins and the bin where it occurs.
    pub fn min_eigenvalue(&self) -> (usize, f64) {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, m)| (k, min_eigenvalue(m)))
            .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc })
    }

    pub fn validate(&self) -> Result<()> {
        for (bin, m) in self.entries.iter().enumerate() {
            let min = min_eigenvalue(m);
            if min < -PSD_TOLERANCE || !min.is_finite() {
                return Err(Error::NotPositiveSemidefinite {
                    bin,
                    min_eigenvalue: min,
                });
            }
        }
        Ok(())
    }
}

fn min_eigenvalue(m: &[[f64; 2]; 2]) -> f64 {
    let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
    0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
}

/// Lower-triangular factor with pivoting for semidefinite bins. Returns
/// `(l00, l10, l11)` in the pivoted order and whether the order was swapped.
fn cholesky2(m: &[[f64; 2]; 2]) -> ([f64; 3], bool) {
    let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
    let factor = |p: f64, q: f64| {
        let l00 = p.sqrt();
        let l10 = b / l00;
        [l00, l10, (q - l10 * l10).max(0.0).sqrt()]
    };
    if a >= c && a > 0.0 {
        (factor(a, c), false)
    } else if c > 0.0 {
        (factor(c, a), true)
    } else {
        ([0.0; 3], false)
    }
}

/// Correlated field records at the two locations.
pub fn synthesize_field_pair(spec: &SpectralMatrix, n_samples: usize, sample_rate: f64, seed: u64) -> Result<TimeSeriesPair> {
    let record = RecordSpec::new(n_samples, sample_rate, seed)?;
    if spec.len() != n_samples {
        return Err(Error::LengthMismatch(spec.len(), n_samples));
    }
    spec.validate()?;

    let scale = (sample_rate / n_samples as f64).sqrt();
    let streams = SeedStreams::new(seed);
    let mut first = vec![Complex64::new(0.0, 0.0); n_samples];
    let mut second = vec![Complex64::new(0.0, 0.0); n_samples];

    first
        .par_chunks_mut(BLOCK)
        .zip(second.par_chunks_mut(BLOCK))
        .enumerate()
        .for_each(|(block, (xs, ys))| {
            let mut rng = streams.rng(StreamTag::FieldPair, block as u64);
            for (offset, (x, y)) in xs.iter_mut().zip(ys.iter_mut()).enumerate() {
                let k = block * BLOCK + offset;
                let z1 = complex_normal(&mut rng);
                let z2 = complex_normal(&mut rng);
                let ([l00, l10, l11], swapped) = cholesky2(&spec.entries[k]);
                let lead = z1 * (l00 * scale);
                let follow = (z1 * l10 + z2 * l11) * scale;
                if swapped {
                    *x = follow;
                    *y = lead;
                } else {
                    *x = lead;
                    *y = follow;
                }
            }
        });

    inverse_dft(&mut first);
    inverse_dft(&mut second);
    Ok(TimeSeriesPair {
        first: TimeSeries {
            sample_rate: record.sample_rate,
            samples: first,
            seed,
        },
        second: TimeSeries {
            sample_rate: record.sample_rate,
            samples: second,
            seed,
        },
    })
}

/// Single record whose two-sided density at angular frequency `ν` is
/// `density(ν)`.
pub fn synthesize_from_density<F>(density: F, record: RecordSpec, tag: StreamTag) -> Result<TimeSeries>
where
    F: Fn(f64) -> f64 + Sync,
{
    let RecordSpec {
        n_samples,
        sample_rate,
        seed,
    } = record;
    let targets: Vec<f64> = (0..n_samples)
        .map(|k| density(2.0 * PI * bin_frequency(k, n_samples, sample_rate)))
        .collect();
    if let Some((bin, &value)) = targets
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v >= -PSD_TOLERANCE) || !v.is_finite())
    {
        return Err(Error::NotPositiveSemidefinite {
            bin,
            min_eigenvalue: value,
        });
    }

    let scale = (sample_rate / n_samples as f64).sqrt();
    let streams = SeedStreams::new(seed);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n_samples];
    spectrum
        .par_chunks_mut(BLOCK)
        .zip(targets.par_chunks(BLOCK))
        .enumerate()
        .for_each(|(block, (xs, ts))| {
            let mut rng = streams.rng(tag, block as u64);
            for (x, t) in xs.iter_mut().zip(ts) {
                *x = complex_normal(&mut rng) * (t.max(0.0).sqrt() * scale);
            }
        });
    inverse_dft(&mut spectrum);
    Ok(TimeSeries {
        sample_rate,
        samples: spectrum,
        seed,
    })
}

/// Heterodyne photocurrent record for `model`'s port, with density
/// `(μ²/2)(F_branch(ν) + N(ν))` over the full signed-frequency grid.
pub fn synthesize_photocurrent(model: &PsdModel, n_samples: usize, sample_rate: f64, seed: u64) -> Result<TimeSeries> {
    let record = RecordSpec::new(n_samples, sample_rate, seed)?;
    let tag = match model.branch {
        crate::detection::Branch::Sum => StreamTag::SumBranch,
        crate::detection::Branch::Difference => StreamTag::DifferenceBranch,
    };
    synthesize_from_density(|nu| model.psd(nu), record, tag)
}

fn inverse_dft(buffer: &mut [Complex64]) {
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(buffer.len());
    fft.process(buffer);
}
