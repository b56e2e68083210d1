//! Numerical routes to the off-diagonal response, independent of the Bessel
//! closed form.
//!
//! * [`response_offdiag_numeric_contour`] integrates the branch-cut reduced
//!   integral `(1/2π) ∫_{-δ}^{δ} e^{-iνz} / √(δ² - z²) dz` after `z = δ sin θ`.
//! * [`response_numeric_epsilon`] integrates `∫ e^{-iνs} W(s - iε) ds` directly
//!   on `[-T, T]` and adds the tails beyond `±T` from their asymptotic
//!   expansion. At finite ε the exact value is `e^{νε} F(ν)`, so
//!   [`response_numeric_extrapolated`] removes the ε dependence by Richardson
//!   extrapolation over a geometric ladder.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::heaviside;
use super::wightman::{checked_delta, wightman_offdiag_at};
use crate::error::{require_finite, Error, Result};
use crate::quadrature::{integrate_adaptive, richardson, trapezoid, AdaptiveOptions};

const MIN_CONTOUR_NODES: usize = 8;
const CUTOFF_FACTOR: f64 = 50.0;
const INV_FOUR_PI: f64 = 1.0 / (4.0 * PI);

/// Contour-reduced off-diagonal response,
/// `(1/2π) Θ(-ν) ∫_{-π/2}^{π/2} e^{-iνδ sin θ} dθ`, on a uniform trapezoid.
///
/// The integrand depends on θ only through `sin θ`, so it is symmetric about
/// both endpoints and every odd derivative vanishes there; the trapezoid rule
/// is spectrally accurate. The imaginary part cancels by parity.
pub fn response_offdiag_numeric_contour(nu: f64, delta_over_cs: f64, n_nodes: usize) -> Result<f64> {
    require_finite("nu", nu)?;
    let d = checked_delta(delta_over_cs)?;
    if n_nodes < MIN_CONTOUR_NODES {
        return Err(Error::TooFewNodes {
            got: n_nodes,
            min: MIN_CONTOUR_NODES,
        });
    }
    let gate = heaviside(-nu);
    if gate == 0.0 {
        return Ok(0.0);
    }
    let a = nu * d;
    let integral = trapezoid(
        |theta| Complex64::from_polar(1.0, -a * theta.sin()),
        -FRAC_PI_2,
        FRAC_PI_2,
        n_nodes,
    );
    assert!(
        integral.im.abs() < 1e-10,
        "contour integral has imaginary residue {:e}",
        integral.im
    );
    Ok(gate * integral.re / (2.0 * PI))
}

/// Result of a direct Fourier quadrature at finite ε.
#[derive(Debug, Clone, Copy)]
pub struct NumericResponse {
    /// Full complex value; the imaginary part vanishes by `W(-s) = conj W(s)`.
    pub value: Complex64,
    pub quadrature_error: f64,
    pub panels: usize,
}

impl NumericResponse {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// `∫ e^{-iνs} W_{12}(s - iε) ds` with `|s| ≤ t_cutoff` integrated adaptively
/// and `|s| > t_cutoff` taken from the large-`|s|` expansion
/// `W = (-i / 4π u) (1 - δ²/u²)^(-1/2)`, `u = s - iε`, integrated term by term
/// by repeated integration by parts.
///
/// Converges to [`super::response_offdiag`] as ε → 0⁺ (the finite-ε value is
/// exactly `e^{νε}` times the limit) and as `t_cutoff` grows.
pub fn response_numeric_epsilon(nu: f64, delta_over_cs: f64, epsilon: f64, t_cutoff: f64) -> Result<NumericResponse> {
    require_finite("nu", nu)?;
    let d = checked_delta(delta_over_cs)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::NonPositiveEpsilon(epsilon));
    }
    let min_cutoff = CUTOFF_FACTOR * d.max(1.0);
    if !(t_cutoff >= min_cutoff) {
        return Err(Error::CutoffTooSmall { t_cutoff, min: min_cutoff });
    }

    let integrand = |s: f64| Complex64::from_polar(1.0, -nu * s) * wightman_offdiag_at(s, epsilon, d);
    let breakpoints = symmetric_breakpoints(t_cutoff, d);
    let opts = AdaptiveOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-12,
        max_initial_width: initial_width(nu),
        ..Default::default()
    };
    let core = integrate_adaptive(integrand, &breakpoints, opts)?;
    let tails = tail_integral(nu, d, epsilon, t_cutoff);
    Ok(NumericResponse {
        value: core.value + tails,
        quadrature_error: core.error_estimate,
        panels: core.panels,
    })
}

/// Geometric ε ladder `start, start/ratio, ...` for Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonLadder {
    pub start: f64,
    pub ratio: f64,
    pub rungs: usize,
}

impl Default for EpsilonLadder {
    /// `{1e-2, 1e-3, 1e-4}`.
    fn default() -> Self {
        Self {
            start: 1e-2,
            ratio: 10.0,
            rungs: 3,
        }
    }
}

impl EpsilonLadder {
    pub fn epsilons(&self) -> Vec<f64> {
        (0..self.rungs)
            .map(|k| self.start / self.ratio.powi(k as i32))
            .collect()
    }

    /// Richardson-extrapolates `f(ε)` over the ladder to ε → 0.
    pub fn extrapolate<F>(&self, mut f: F) -> Result<f64>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let values = self
            .epsilons()
            .into_iter()
            .map(&mut f)
            .collect::<Result<Vec<_>>>()?;
        Ok(richardson(&values, self.ratio))
    }
}

/// ε → 0⁺ limit of [`response_numeric_epsilon`] over an ε ladder.
pub fn response_numeric_extrapolated(nu: f64, delta_over_cs: f64, ladder: EpsilonLadder, t_cutoff: f64) -> Result<f64> {
    ladder.extrapolate(|eps| Ok(response_numeric_epsilon(nu, delta_over_cs, eps, t_cutoff)?.re()))
}

pub(crate) fn symmetric_breakpoints(half_width: f64, d: f64) -> Vec<f64> {
    let mut points = vec![-half_width, 0.0, half_width];
    if d > 0.0 && d < half_width {
        points.extend([-d, d]);
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

/// Initial panels span at most half an oscillation period.
pub(crate) fn initial_width(nu: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else {
        (PI / nu.abs()).min(1.0)
    }
}

/// `∫_{|s|>T} e^{-iνs} W_{12}(s - iε) ds` from the asymptotic expansion of the
/// integrand in powers of `1/u`.
fn tail_integral(nu: f64, d: f64, epsilon: f64, t: f64) -> Complex64 {
    let prefactor = Complex64::new(0.0, -INV_FOUR_PI);
    let u_hi = Complex64::new(t, -epsilon);
    let u_lo = Complex64::new(-t, -epsilon);
    let ratio = (d / t) * (d / t);

    let mut total = Complex64::new(0.0, 0.0);
    let mut coeff = 1.0; // binom(2k, k) / 4^k
    let mut d_pow = 1.0; // d^(2k)
    for k in 0..64 {
        if k > 0 {
            coeff *= (2 * k - 1) as f64 / (2 * k) as f64;
            d_pow *= d * d;
        }
        let n = 2 * k + 1;
        let term = if nu == 0.0 {
            // Symmetric truncation: the 1/u pair cancels, higher powers close.
            if n == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                let m = (n - 1) as f64;
                (u_hi.powf(-m) - u_lo.powf(-m)) / m
            }
        } else {
            power_tail(nu, n, u_hi, t, true) + power_tail(nu, n, u_lo, t, false)
        };
        total += term * (coeff * d_pow);
        if coeff * ratio.powi(k as i32) < 1e-18 && k > 0 {
            break;
        }
    }
    prefactor * total
}

/// `∫_T^∞ e^{-iνs} u^{-n} ds` (upper) or `∫_{-∞}^{-T} e^{-iνs} u^{-n} ds`
/// (lower) via `e^{-iνs₀} Σ_j f^{(j)}(s₀) / (iν)^{j+1}` with
/// `f^{(j)} = (-1)^j (n)_j u^{-n-j}`, truncated at its smallest term.
fn power_tail(nu: f64, n: usize, u0: Complex64, t: f64, upper: bool) -> Complex64 {
    let i_nu = Complex64::new(0.0, nu);
    let s0 = if upper { t } else { -t };
    let phase = Complex64::from_polar(1.0, -nu * s0);
    let inv_u = u0.inv();

    let mut term = inv_u.powi(n as i32) / i_nu; // j = 0
    let mut sum = term;
    let mut last = term.norm();
    for j in 0..200usize {
        let next = term * (-((n + j) as f64)) * inv_u / i_nu;
        let size = next.norm();
        if size >= last || size < 1e-20 * sum.norm() {
            break;
        }
        sum += next;
        term = next;
        last = size;
    }
    let signed = phase * sum;
    if upper {
        signed
    } else {
        -signed
    }
}
