//! Wightman functions and response functions for a detector held in a
//! superposition of two static locations in a (2+1)-dimensional massless
//! scalar vacuum.
//!
//! Units: the math here runs with the propagation speed set to 1, so a
//! separation enters only through `delta_over_cs`, a time. Frequencies are
//! angular and only ever appear in the product `nu * delta_over_cs`. The
//! conversion from laboratory units lives in [`crate::analog`].

mod numeric;
mod transition;
mod wightman;

pub use numeric::{
    response_numeric_epsilon, response_numeric_extrapolated, response_offdiag_numeric_contour,
    EpsilonLadder, NumericResponse,
};
pub use transition::{transition_probability, total_transition_probability, SwitchingWindow, TransitionProbability};
pub use wightman::{wightman_diagonal, wightman_offdiag, wightman_offdiag_at};

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};
use crate::special::j0;

/// Heaviside step with the symmetric midpoint `Θ(0) = 1/2`.
pub fn heaviside(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        0.0
    } else {
        0.5
    }
}

/// Sign function with `sgn(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A proper-time difference carrying its `iε` regularization. The Wightman
/// functions are evaluated at the complex time `s - iε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedTime {
    s: f64,
    epsilon: f64,
}

impl RegularizedTime {
    pub fn new(s: f64, epsilon: f64) -> Result<Self> {
        require_finite("s", s)?;
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::NonPositiveEpsilon(epsilon));
        }
        Ok(Self { s, epsilon })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Two planar detector locations and the propagation speed of the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorGeometry {
    x1: [f64; 2],
    x2: [f64; 2],
    delta: f64,
    c_s: f64,
}

impl DetectorGeometry {
    pub fn new(x1: [f64; 2], x2: [f64; 2], c_s: f64) -> Result<Self> {
        for v in x1.iter().chain(x2.iter()) {
            require_finite("position", *v)?;
        }
        require_positive("c_s", c_s)?;
        let delta = (x1[0] - x2[0]).hypot(x1[1] - x2[1]);
        Ok(Self { x1, x2, delta, c_s })
    }

    /// Places the first detector at the origin and the second on the x axis.
    pub fn from_separation(delta: f64, c_s: f64) -> Result<Self> {
        require_non_negative("delta", delta)?;
        Self::new([0.0, 0.0], [delta, 0.0], c_s)
    }

    pub fn x1(&self) -> [f64; 2] {
        self.x1
    }

    pub fn x2(&self) -> [f64; 2] {
        self.x2
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn c_s(&self) -> f64 {
        self.c_s
    }

    /// Light-crossing time of the separation, `δ / c_s`.
    pub fn delta_over_cs(&self) -> f64 {
        self.delta / self.c_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentKind {
    Diagonal,
    OffDiagonal,
}

/// One entry `F_ij(ν)` of the 2×2 response matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseComponent {
    pub i: usize,
    pub j: usize,
    pub kind: ComponentKind,
    pub nu: f64,
    pub value: f64,
}

/// Diagonal response `F_jj(ν) = Θ(-ν) / 2`.
pub fn response_diag(nu: f64) -> f64 {
    0.5 * heaviside(-nu)
}

/// Off-diagonal response `F_ij(ν) = Θ(-ν) J0(ν δ/c_s) / 2`.
pub fn response_offdiag(nu: f64, delta_over_cs: f64) -> Result<f64> {
    require_finite("nu", nu)?;
    require_non_negative("delta_over_cs", delta_over_cs)?;
    Ok(offdiag_unchecked(nu, delta_over_cs))
}

fn offdiag_unchecked(nu: f64, delta_over_cs: f64) -> f64 {
    let gate = heaviside(-nu);
    if gate == 0.0 {
        0.0
    } else {
        0.5 * gate * j0(nu * delta_over_cs)
    }
}

/// Total response `F = F11 + F12 + F21 + F22 = Θ(-ν)(1 + J0(νδ/c_s))`.
pub fn total_response(nu: f64, delta_over_cs: f64) -> Result<f64> {
    Ok(ResponseModel::new(delta_over_cs)?.total(nu))
}

/// Difference-port response `F_diff = Θ(-ν)(1 - J0(νδ/c_s))`.
pub fn diff_response(nu: f64, delta_over_cs: f64) -> Result<f64> {
    Ok(ResponseModel::new(delta_over_cs)?.diff(nu))
}

/// The four response components for a fixed geometry.
///
/// With `superposition` disabled the off-diagonal terms are zeroed for every
/// consumer, which models a detector following a single trajectory and gives
/// the witness its null hypothesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseModel {
    delta_over_cs: f64,
    superposition: bool,
}

impl ResponseModel {
    pub fn new(delta_over_cs: f64) -> Result<Self> {
        require_non_negative("delta_over_cs", delta_over_cs)?;
        Ok(Self {
            delta_over_cs,
            superposition: true,
        })
    }

    pub fn from_geometry(geom: &DetectorGeometry) -> Self {
        Self {
            delta_over_cs: geom.delta_over_cs(),
            superposition: true,
        }
    }

    pub fn single_trajectory(mut self) -> Self {
        self.superposition = false;
        self
    }

    pub fn with_superposition(mut self, on: bool) -> Self {
        self.superposition = on;
        self
    }

    pub fn delta_over_cs(&self) -> f64 {
        self.delta_over_cs
    }

    pub fn is_superposition(&self) -> bool {
        self.superposition
    }

    pub fn diagonal(&self, nu: f64) -> f64 {
        response_diag(nu)
    }

    pub fn off_diagonal(&self, nu: f64) -> f64 {
        if self.superposition {
            offdiag_unchecked(nu, self.delta_over_cs)
        } else {
            0.0
        }
    }

    /// `[F11, F12, F21, F22]`.
    pub fn components(&self, nu: f64) -> [ResponseComponent; 4] {
        let d = self.diagonal(nu);
        let od = self.off_diagonal(nu);
        let entry = |i, j, kind, value| ResponseComponent { i, j, kind, nu, value };
        [
            entry(1, 1, ComponentKind::Diagonal, d),
            entry(1, 2, ComponentKind::OffDiagonal, od),
            entry(2, 1, ComponentKind::OffDiagonal, od),
            entry(2, 2, ComponentKind::Diagonal, d),
        ]
    }

    /// Sum-port response: every component with weight +1.
    pub fn total(&self, nu: f64) -> f64 {
        self.components(nu).iter().map(|c| c.value).sum()
    }

    /// Difference-port response: off-diagonal components enter with weight -1.
    pub fn diff(&self, nu: f64) -> f64 {
        self.components(nu)
            .iter()
            .map(|c| match c.kind {
                ComponentKind::Diagonal => c.value,
                ComponentKind::OffDiagonal => -c.value,
            })
            .sum()
    }

    /// Cross-spectral matrix `[[F11, F12], [F21, F22]]` of the field at the two
    /// locations.
    pub fn spectral_matrix(&self, nu: f64) -> [[f64; 2]; 2] {
        let [f11, f12, f21, f22] = self.components(nu).map(|c| c.value);
        [[f11, f12], [f21, f22]]
    }
}
