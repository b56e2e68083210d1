//! Quadrature and extrapolation helpers shared by the numeric response routines.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Initial panels are no wider than this.
    pub max_initial_width: f64,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_panels: 400_000,
            max_initial_width: 1.0,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // Largest error first; ties broken by position so the split order is
    // fully determined by the inputs.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).norm();
    (value, error)
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand.
///
/// `breakpoints` must be sorted; the interval is `[breakpoints[0], last]` and
/// every interior breakpoint becomes a panel edge, so integrable endpoint
/// singularities and near-singular features should be placed there.
pub fn integrate_adaptive<F>(f: F, breakpoints: &[f64], opts: AdaptiveOptions) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex64,
{
    let mut heap = BinaryHeap::new();
    for edge in breakpoints.windows(2) {
        let (lo, hi) = (edge[0], edge[1]);
        if hi <= lo {
            continue;
        }
        let pieces = ((hi - lo) / opts.max_initial_width).ceil().max(1.0) as usize;
        let width = (hi - lo) / pieces as f64;
        for i in 0..pieces {
            let a = lo + width * i as f64;
            let b = if i + 1 == pieces { hi } else { lo + width * (i + 1) as f64 };
            let (value, error) = kronrod15(&f, a, b);
            heap.push(Panel { a, b, value, error });
        }
    }

    loop {
        let (total, error) = heap
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error));
        let target = opts.abs_tol.max(opts.rel_tol * total.norm());
        if error <= target {
            return Ok(QuadratureResult {
                value: total,
                error_estimate: error,
                panels: heap.len(),
            });
        }
        if heap.len() >= opts.max_panels {
            return Err(Error::QuadratureNotConverged {
                error,
                panels: heap.len(),
            });
        }
        // Split a batch of the worst panels before re-summing.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Cannot subdivide further in f64; keep it and stop splitting.
                heap.push(worst);
                let error: f64 = heap.iter().map(|p| p.error).sum();
                return Err(Error::QuadratureNotConverged {
                    error,
                    panels: heap.len(),
                });
            }
            let (lv, le) = kronrod15(&f, worst.a, mid);
            let (rv, re) = kronrod15(&f, mid, worst.b);
            heap.push(Panel { a: worst.a, b: mid, value: lv, error: le });
            heap.push(Panel { a: mid, b: worst.b, value: rv, error: re });
        }
    }
}

/// Composite trapezoid rule with `n_nodes` equally spaced nodes including both
/// endpoints.
pub fn trapezoid<F>(f: F, a: f64, b: f64, n_nodes: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    debug_assert!(n_nodes >= 2);
    let intervals = (n_nodes - 1) as f64;
    let h = (b - a) / intervals;
    let mut sum = (f(a) + f(b)) * 0.5;
    for i in 1..n_nodes - 1 {
        sum += f(a + h * i as f64);
    }
    sum * h
}

/// Richardson extrapolation of values computed at step sizes
/// `h, h/ratio, h/ratio^2, ...` with error expansion in integer powers of `h`.
/// Returns the most extrapolated entry of the Neville table.
pub fn richardson(values: &[f64], ratio: f64) -> f64 {
    assert!(!values.is_empty());
    let mut table = values.to_vec();
    let mut factor = 1.0;
    for level in 1..values.len() {
        factor *= ratio;
        for k in (level..values.len()).rev() {
            table[k] = (factor * table[k] - table[k - 1]) / (factor - 1.0);
        }
    }
    table[values.len() - 1]
}
