//! Finite-time transition probabilities with a Gaussian switching function.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::numeric::{initial_width, symmetric_breakpoints, EpsilonLadder};
use super::wightman::{checked_delta, wightman_offdiag_at};
use super::ComponentKind;
use crate::error::{require_finite, require_positive, Result};
use crate::quadrature::{integrate_adaptive, AdaptiveOptions};

/// Window autocorrelation is below 1e-17 of its peak beyond this many widths.
const SUPPORT_IN_WIDTHS: f64 = 13.0;

/// Switching function `η(τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SwitchingWindow {
    /// `η = 1`; the response-function limit, no finite probability.
    Constant,
    /// `η(τ) = exp(-τ² / 2T²)`, peak 1.
    Gaussian { width: f64 },
}

impl SwitchingWindow {
    pub fn gaussian(width: f64) -> Result<Self> {
        require_positive("T", width)?;
        Ok(Self::Gaussian { width })
    }

    pub fn eval(&self, tau: f64) -> f64 {
        match *self {
            Self::Constant => 1.0,
            Self::Gaussian { width } => (-tau * tau / (2.0 * width * width)).exp(),
        }
    }

    /// `K(s) = ∫ η(τ) η(τ - s) dτ = T√π exp(-s²/4T²)` for the Gaussian window.
    pub fn autocorrelation(&self, s: f64) -> Option<f64> {
        match *self {
            Self::Constant => None,
            Self::Gaussian { width } => Some(width * PI.sqrt() * (-s * s / (4.0 * width * width)).exp()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionProbability {
    /// `P_ij(ν)` after ε extrapolation.
    pub value: f64,
    /// Largest `|Im P| / |P|` seen across the ε ladder.
    pub imaginary_residue: f64,
    /// `P / (T√π)`, which tends to the response function for long windows.
    pub rate: f64,
}

/// `P_ij(ν) = ∫∫ η(τ) η(τ') e^{-iν(τ-τ')} W_ij(τ - τ') dτ dτ'`.
///
/// For a stationary Wightman function this collapses to
/// `∫ K(s) e^{-iνs} W_ij(s) ds`. Each rung of the default ε ladder is
/// integrated adaptively and the ladder is Richardson-extrapolated to ε → 0⁺.
/// Diagonal entries are nonnegative; off-diagonal entries are real but take
/// the sign of the smoothed `J0`.
pub fn transition_probability(
    nu: f64,
    window: SwitchingWindow,
    delta_over_cs: f64,
    component: ComponentKind,
) -> Result<TransitionProbability> {
    transition_probability_with(nu, window, delta_over_cs, component, EpsilonLadder::default())
}

pub fn transition_probability_with(
    nu: f64,
    window: SwitchingWindow,
    delta_over_cs: f64,
    component: ComponentKind,
    ladder: EpsilonLadder,
) -> Result<TransitionProbability> {
    require_finite("nu", nu)?;
    let d = match component {
        ComponentKind::Diagonal => 0.0,
        ComponentKind::OffDiagonal => checked_delta(delta_over_cs)?,
    };
    let width = match window {
        SwitchingWindow::Gaussian { width } => require_positive("T", width)?,
        SwitchingWindow::Constant => {
            return Err(crate::error::Error::InvalidParameter {
                name: "T",
                value: f64::INFINITY,
                reason: "constant switching has no finite transition probability",
            })
        }
    };

    let half_width = SUPPORT_IN_WIDTHS * width;
    let breakpoints = symmetric_breakpoints(half_width, d);
    let opts = AdaptiveOptions {
        abs_tol: 1e-11 * width,
        rel_tol: 1e-12,
        max_initial_width: initial_width(nu).min(width / 4.0),
        ..Default::default()
    };

    let mut residue: f64 = 0.0;
    let value = ladder.extrapolate(|eps| {
        let integrand = |s: f64| {
            let k = window.autocorrelation(s).unwrap_or(0.0);
            Complex64::from_polar(k, -nu * s) * wightman_offdiag_at(s, eps, d)
        };
        let r = integrate_adaptive(integrand, &breakpoints, opts)?;
        if r.value.norm() > 0.0 {
            residue = residue.max(r.value.im.abs() / r.value.norm());
        }
        Ok(r.value.re)
    })?;

    Ok(TransitionProbability {
        value,
        imaginary_residue: residue,
        rate: value / (width * PI.sqrt()),
    })
}

/// `P(ν) = (λ²/4) Σ_ij P_ij(ν)` for the superposed detector.
pub fn total_transition_probability(nu: f64, window: SwitchingWindow, delta_over_cs: f64, lambda: f64) -> Result<f64> {
    require_finite("lambda", lambda)?;
    let diag = transition_probability(nu, window, delta_over_cs, ComponentKind::Diagonal)?;
    let off = transition_probability(nu, window, delta_over_cs, ComponentKind::OffDiagonal)?;
    Ok(0.25 * lambda * lambda * 2.0 * (diag.value + off.value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::trapezoid;

    #[test]
    fn autocorrelation_matches_direct_integral() {
        let w = SwitchingWindow::gaussian(1.5).unwrap();
        for s in [0.0, 0.7, 3.0] {
            let direct = trapezoid(|tau| Complex64::new(w.eval(tau) * w.eval(tau - s), 0.0), -30.0, 30.0, 6001);
            assert!((direct.re - w.autocorrelation(s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive_width() {
        assert!(SwitchingWindow::gaussian(0.0).is_err());
        assert!(transition_probability(-1.0, SwitchingWindow::Gaussian { width: -1.0 }, 1.0, ComponentKind::Diagonal).is_err());
        assert!(transition_probability(-1.0, SwitchingWindow::Constant, 1.0, ComponentKind::Diagonal).is_err());
    }

    #[test]
    fn diagonal_is_real_and_positive() {
        let w = SwitchingWindow::gaussian(5.0).unwrap();
        for nu in [-2.0, -0.5, 0.5] {
            let p = transition_probability(nu, w, 0.0, ComponentKind::Diagonal).unwrap();
            assert!(p.value > 0.0, "P({nu}) = {}", p.value);
            assert!(p.imaginary_residue < 1e-8);
        }
        // Far above the gap the exact value is ~1e-45; only rounding remains.
        let far = transition_probability(2.0, w, 0.0, ComponentKind::Diagonal).unwrap();
        assert!(far.value.abs() < 1e-12);
    }
}
