//! Condensate and probe-laser parameters, and the bridge from laboratory
//! units to the dimensionless quantities used by the response and detection
//! models.
//!
//! SI conventions:
//!
//! * `c_s = √(g2d ρ0 / m)` needs no ħ: `g2d` in J·m², `ρ0` in m⁻², `m` in kg
//!   gives m/s directly.
//! * The coupling `μ = -|α_R| ω0 √(2 m ρ0) α` is dimensionless in natural
//!   units. `alpha_r` is therefore taken in the matching effective unit
//!   (m·s·kg^-1/2, i.e. ħ already absorbed), so the formula is applied as is.
//! * The density-to-field map `φ = δρ / (2√(m ρ0))` is likewise a natural-unit
//!   (ħ = 1) expression.

use std::f64::consts::PI;

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};
use crate::response::DetectorGeometry;

/// Atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Cs-133 atomic mass, u.
pub const CS133_MASS_U: f64 = 132.905_451_961;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CondensateLaserParams {
    /// Atomic mass `m`, kg.
    pub mass: f64,
    /// Two-dimensional background density `ρ0`, m⁻².
    pub density: f64,
    /// s-wave interaction strength `g2d`, J·m². No default exists.
    pub g2d: Option<f64>,
    /// Laser angular frequency `ω0`, rad/s.
    pub omega0: f64,
    /// Magnitude of the real polarizability, effective natural units.
    pub alpha_r: Option<f64>,
    /// Coherent amplitude per modulation band (real, dimensionless).
    pub alpha: Option<f64>,
    /// Beam radius `r0`, m.
    pub beam_radius: f64,
}

impl CondensateLaserParams {
    /// Cs-133 condensate at 10³ μm⁻², probed at ω0/2π = 10¹⁴ Hz with a 3 μm
    /// beam. `g2d`, `alpha_r` and `alpha` are left unset.
    pub fn cs133() -> Self {
        Self {
            mass: CS133_MASS_U * ATOMIC_MASS_UNIT,
            density: 1e3 * 1e12,
            g2d: None,
            omega0: 2.0 * PI * 1e14,
            alpha_r: None,
            alpha: None,
            beam_radius: 3e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass)?;
        require_positive("density", self.density)?;
        require_positive("omega0", self.omega0)?;
        require_positive("beam_radius", self.beam_radius)?;
        if let Some(g) = self.g2d {
            require_non_negative("g2d", g)?;
        }
        if let Some(a) = self.alpha_r {
            require_finite("alpha_r", a)?;
        }
        if let Some(a) = self.alpha {
            require_finite("alpha", a)?;
        }
        Ok(())
    }

    pub fn beam_area(&self) -> f64 {
        PI * self.beam_radius * self.beam_radius
    }

    /// Density fluctuation to Klein-Gordon field amplitude (natural units).
    pub fn field_from_density(&self, delta_rho: f64) -> f64 {
        delta_rho / (2.0 * (self.mass * self.density).sqrt())
    }
}

/// `c_s = √(g2d ρ0 / m)`.
pub fn sound_speed(p: &CondensateLaserParams) -> Result<f64> {
    p.validate()?;
    let g2d = p.g2d.ok_or(Error::MissingParameter("g2d"))?;
    if g2d == 0.0 {
        return Err(Error::DegenerateMedium);
    }
    Ok((g2d * p.density / p.mass).sqrt())
}

/// `μ = -|α_R| ω0 √(2 m ρ0) α`. Only `μ²` enters the noise budget.
pub fn coupling_mu(p: &CondensateLaserParams) -> Result<f64> {
    p.validate()?;
    let alpha_r = p.alpha_r.ok_or(Error::MissingParameter("alpha_r"))?;
    let alpha = p.alpha.ok_or(Error::MissingParameter("alpha"))?;
    Ok(-alpha_r.abs() * p.omega0 * (2.0 * p.mass * p.density).sqrt() * alpha)
}

/// `x = ν δ / c_s`.
pub fn dimensionless_frequency(nu: f64, geom: &DetectorGeometry) -> f64 {
    nu * geom.delta_over_cs()
}

/// Inverse of [`dimensionless_frequency`]; undefined at zero separation.
pub fn frequency_from_dimensionless(x: f64, geom: &DetectorGeometry) -> Result<f64> {
    let scale = geom.delta_over_cs();
    if scale == 0.0 {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: 0.0,
            reason: "the map nu -> nu*delta/c_s is not invertible at zero separation",
        });
    }
    Ok(x / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_params() -> CondensateLaserParams {
        CondensateLaserParams {
            mass: 2.0,
            density: 3.0,
            g2d: Some(2.0 / 3.0),
            omega0: 1.0,
            alpha_r: Some(0.5),
            alpha: Some(1.0),
            beam_radius: 1.0,
        }
    }

    #[test]
    fn sound_speed_identity_and_scaling() {
        let p = unit_params();
        assert_eq!(sound_speed(&p).unwrap(), 1.0);
        let quad = CondensateLaserParams { density: 12.0, ..p };
        assert!((sound_speed(&quad).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sound_speed_errors() {
        let p = CondensateLaserParams { g2d: Some(0.0), ..unit_params() };
        assert_eq!(sound_speed(&p), Err(Error::DegenerateMedium));
        assert_eq!(
            sound_speed(&CondensateLaserParams::cs133()),
            Err(Error::MissingParameter("g2d"))
        );
        let bad = CondensateLaserParams { mass: -1.0, ..unit_params() };
        assert!(sound_speed(&bad).is_err());
    }

    #[test]
    fn cs133_preset() {
        let p = CondensateLaserParams::cs133();
        assert!((p.mass - 2.206946951453701e-25).abs() < 1e-36);
        assert_eq!(p.density, 1e15);
        assert!((p.omega0 - 6.283185307179586e14).abs() < 1.0);
        assert_eq!(p.beam_radius, 3e-6);
        assert_eq!(coupling_mu(&p), Err(Error::MissingParameter("alpha_r")));
        // Pinned regression value for a user-supplied g2d of 1e-38 J·m².
        let with_g = CondensateLaserParams { g2d: Some(1e-38), ..p };
        let c = sound_speed(&with_g).unwrap();
        assert!((c - (1e-38 * 1e15 / 2.206946951453701e-25f64).sqrt()).abs() < 1e-15);
        assert!((c - 6.731379145833781).abs() < 1e-12, "{c}");
    }

    #[test]
    fn unit_audit() {
        // Same condensate in SI and in (kg, μm, ms): g2d [kg·L⁴/T²], ρ0 [L⁻²].
        let si = CondensateLaserParams {
            g2d: Some(3.7e-39),
            ..CondensateLaserParams::cs133()
        };
        let um = 1e6;
        let ms = 1e3;
        let lab = CondensateLaserParams {
            density: si.density / (um * um),
            g2d: Some(3.7e-39 * um.powi(4) / (ms * ms)),
            ..si
        };
        let c_si = sound_speed(&si).unwrap();
        let c_lab = sound_speed(&lab).unwrap() * (1.0 / um) * ms;
        assert!(((c_si - c_lab) / c_si).abs() < 1e-12);
    }

    #[test]
    fn coupling_linear_in_alpha() {
        let p = unit_params();
        let mu = coupling_mu(&p).unwrap();
        assert!((mu + 0.5 * 12f64.sqrt()).abs() < 1e-15);
        let zero = CondensateLaserParams { alpha: Some(0.0), ..p };
        assert_eq!(coupling_mu(&zero).unwrap().abs(), 0.0);
        let double = CondensateLaserParams { alpha: Some(2.0), ..p };
        assert!((coupling_mu(&double).unwrap().abs() - 2.0 * mu.abs()).abs() < 1e-15);
    }

    #[test]
    fn dimensionless_frequency_cases() {
        let g = DetectorGeometry::from_separation(3.0, 3.0).unwrap();
        assert_eq!(dimensionless_frequency(0.0, &g), 0.0);
        assert_eq!(dimensionless_frequency(-1.7, &g), -1.7);
        let z = DetectorGeometry::from_separation(0.0, 3.0).unwrap();
        assert!(frequency_from_dimensionless(1.0, &z).is_err());
    }

    proptest! {
        #[test]
        fn mu_squared_sign_invariant(alpha in -10.0f64..10.0, ar in -5.0f64..5.0) {
            let p = CondensateLaserParams { alpha: Some(alpha), alpha_r: Some(ar), ..unit_params() };
            let q = CondensateLaserParams { alpha: Some(-alpha), alpha_r: Some(-ar), ..unit_params() };
            let (a, b) = (coupling_mu(&p).unwrap(), coupling_mu(&q).unwrap());
            prop_assert_eq!(a * a, b * b);
        }

        #[test]
        fn frequency_round_trip(nu in -1e6f64..1e6, delta in 1e-6f64..1e-3, c in 1e-4f64..1e-2) {
            let g = DetectorGeometry::from_separation(delta, c).unwrap();
            let back = frequency_from_dimensionless(dimensionless_frequency(nu, &g), &g).unwrap();
            prop_assert!((back - nu).abs() <= 1e-12 * nu.abs().max(1e-300));
        }
    }
}
