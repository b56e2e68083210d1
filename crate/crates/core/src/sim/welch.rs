//! Welch estimator: periodic Hann window, 50% overlap, averaged periodograms
//! normalized to a two-sided density per unit frequency.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::{require_power_of_two, TimeSeries};
use crate::error::{Error, Result};

/// Periodic ("DFT-even") Hann window of length `len`.
pub fn hann_window(len: usize) -> Vec<f64> {
    (0..len)
        .map(|n| {
            let s = (PI * n as f64 / len as f64).sin();
            s * s
        })
        .collect()
}

/// Averaged auto-spectrum, bins in ascending frequency on `[-fs/2, fs/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdEstimate {
    pub frequencies: Vec<f64>,
    pub density: Vec<f64>,
    pub n_segments: usize,
    pub segment_len: usize,
    pub sample_rate: f64,
    /// Variance inflation from correlation between overlapping segments.
    pub variance_factor: f64,
}

impl PsdEstimate {
    /// `ν = 2π f` for each bin.
    pub fn angular_frequencies(&self) -> Vec<f64> {
        self.frequencies.iter().map(|f| 2.0 * PI * f).collect()
    }

    /// Relative standard error of every bin, `√(variance_factor / K)`.
    pub fn relative_std_error(&self) -> f64 {
        (self.variance_factor / self.n_segments as f64).sqrt()
    }

    /// Standard error of bin `k` taking `expected` as the true density.
    pub fn std_error_for(&self, expected: f64) -> f64 {
        expected * self.relative_std_error()
    }

    /// Standard error of each bin using the estimate itself.
    pub fn std_error(&self) -> Vec<f64> {
        let r = self.relative_std_error();
        self.density.iter().map(|d| d * r).collect()
    }

    pub fn bin_width(&self) -> f64 {
        self.sample_rate / self.segment_len as f64
    }

    /// `Σ S_k Δf`, the power the estimate attributes to the record.
    pub fn integrated_power(&self) -> f64 {
        super::pairwise_sum(&self.density) * self.bin_width()
    }
}

/// Averaged cross-spectrum `E[X Y*]` of two records.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossPsdEstimate {
    pub frequencies: Vec<f64>,
    pub density: Vec<Complex64>,
    pub n_segments: usize,
    pub segment_len: usize,
    pub sample_rate: f64,
    pub variance_factor: f64,
}

/// Welch auto-spectrum of `record` with segments of `segment_len` samples.
pub fn welch_psd(record: &TimeSeries, segment_len: usize) -> Result<PsdEstimate> {
    let cross = welch_cross_psd(record, record, segment_len)?;
    Ok(PsdEstimate {
        frequencies: cross.frequencies,
        density: cross.density.iter().map(|z| z.re.max(0.0)).collect(),
        n_segments: cross.n_segments,
        segment_len: cross.segment_len,
        sample_rate: cross.sample_rate,
        variance_factor: cross.variance_factor,
    })
}

/// Welch cross-spectrum of two equally long records.
pub fn welch_cross_psd(x: &TimeSeries, y: &TimeSeries, segment_len: usize) -> Result<CrossPsdEstimate> {
    require_power_of_two("segment_len", segment_len)?;
    let n = x.len();
    if y.len() != n {
        return Err(Error::LengthMismatch(n, y.len()));
    }
    if segment_len > n {
        return Err(Error::SegmentTooLong {
            segment_len,
            n_samples: n,
        });
    }
    let step = (segment_len / 2).max(1);
    let n_segments = (n - segment_len) / step + 1;
    let window = hann_window(segment_len);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let overlap_corr: f64 = if step < segment_len {
        (0..segment_len - step).map(|i| window[i] * window[i + step]).sum::<f64>() / window_power
    } else {
        0.0
    };
    let variance_factor = if n_segments > 1 {
        1.0 + 2.0 * (1.0 - 1.0 / n_segments as f64) * overlap_corr * overlap_corr
    } else {
        1.0
    };

    let ctx = SegmentContext {
        x: &x.samples,
        y: &y.samples,
        same: std::ptr::eq(x, y),
        window: &window,
        step,
        fft: FftPlanner::<f64>::new().plan_fft_forward(segment_len),
    };
    let summed = ctx.accumulate(0..n_segments);

    let norm = 1.0 / (x.sample_rate * window_power * n_segments as f64);
    let half = segment_len / 2;
    let mut frequencies = Vec::with_capacity(segment_len);
    let mut density = Vec::with_capacity(segment_len);
    for j in 0..segment_len {
        let k = (j + half) % segment_len;
        frequencies.push((j as f64 - half as f64) * x.sample_rate / segment_len as f64);
        density.push(summed[k] * norm);
    }
    Ok(CrossPsdEstimate {
        frequencies,
        density,
        n_segments,
        segment_len,
        sample_rate: x.sample_rate,
        variance_factor,
    })
}

struct SegmentContext<'a> {
    x: &'a [Complex64],
    y: &'a [Complex64],
    same: bool,
    window: &'a [f64],
    step: usize,
    fft: Arc<dyn Fft<f64>>,
}

impl SegmentContext<'_> {
    /// Sum of raw cross-periodograms over `segments`, reduced as a balanced
    /// binary tree whose shape depends only on the segment count.
    fn accumulate(&self, segments: Range<usize>) -> Vec<Complex64> {
        if segments.len() <= 2 {
            let mut total = vec![Complex64::new(0.0, 0.0); self.window.len()];
            for s in segments {
                for (t, p) in total.iter_mut().zip(self.periodogram(s)) {
                    *t += p;
                }
            }
            return total;
        }
        let mid = segments.start + segments.len() / 2;
        let (mut left, right) = rayon::join(
            || self.accumulate(segments.start..mid),
            || self.accumulate(mid..segments.end),
        );
        for (l, r) in left.iter_mut().zip(right) {
            *l += r;
        }
        left
    }

    fn periodogram(&self, segment: usize) -> Vec<Complex64> {
        let start = segment * self.step;
        let len = self.window.len();
        let transform = |data: &[Complex64]| {
            let mut buf: Vec<Complex64> = data[start..start + len]
                .iter()
                .zip(self.window)
                .map(|(z, w)| z * w)
                .collect();
            self.fft.process(&mut buf);
            buf
        };
        let fx = transform(self.x);
        if self.same {
            fx.iter().map(|z| Complex64::new(z.norm_sqr(), 0.0)).collect()
        } else {
            let fy = transform(self.y);
            fx.iter().zip(&fy).map(|(a, b)| a * b.conj()).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(samples: Vec<Complex64>, fs: f64) -> TimeSeries {
        TimeSeries {
            sample_rate: fs,
            samples,
            seed: 0,
        }
    }

    #[test]
    fn segment_count_and_errors() {
        let rec = series(vec![Complex64::new(1.0, 0.0); 1024], 1.0);
        let est = welch_psd(&rec, 256).unwrap();
        assert_eq!(est.n_segments, 7);
        assert_eq!(est.frequencies.len(), 256);
        assert_eq!(est.frequencies[0], -0.5);
        assert!(matches!(welch_psd(&rec, 2048), Err(Error::SegmentTooLong { .. })));
        assert!(matches!(welch_psd(&rec, 100), Err(Error::NotPowerOfTwo { .. })));
    }

    #[test]
    fn hann_overlap_correlation() {
        let w = hann_window(1024);
        let num: f64 = (0..512).map(|i| w[i] * w[i + 512]).sum();
        let den: f64 = w.iter().map(|v| v * v).sum();
        assert!((num / den - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn tone_at_bin_center() {
        let fs = 64.0;
        let len = 64;
        let bin = 5i64;
        let f0 = bin as f64 * fs / len as f64;
        let samples = (0..1024)
            .map(|n| Complex64::from_polar(1.0, 2.0 * PI * f0 * n as f64 / fs))
            .collect();
        let est = welch_psd(&series(samples, fs), len).unwrap();
        let (peak, &max) = est
            .density
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert_eq!(est.frequencies[peak], f0);
        // Periodic Hann at a bin center leaks only into the two neighbours;
        // every other bin sits below the -31.5 dB first-sidelobe level.
        let floor = max * 10f64.powf(-31.5 / 10.0);
        for (j, d) in est.density.iter().enumerate() {
            if (j as i64 - peak as i64).abs() > 1 {
                assert!(*d < floor, "bin {j}: {d}");
            }
        }
        let neighbour = est.density[peak + 1] / max;
        assert!((neighbour - 0.25).abs() < 1e-12);
    }
}
