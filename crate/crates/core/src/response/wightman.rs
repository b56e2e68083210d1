use std::f64::consts::PI;

use num_complex::Complex64;

use super::{DetectorGeometry, RegularizedTime};
use crate::error::{require_non_negative, Result};

const INV_FOUR_PI: f64 = 1.0 / (4.0 * PI);

/// Vacuum Wightman function pulled back to one static trajectory,
/// `(1/4π) (-(s - iε)²)^(-1/2)` on the principal branch.
///
/// Since `-(s - iε)² = (ε + is)²` and `ε + is` lies in the right half plane,
/// the principal root is `ε + is` itself; the value is therefore
/// `-i / (4π (s - iε))` and satisfies `W(-s) = conj(W(s))` exactly at finite ε.
pub fn wightman_diagonal(t: RegularizedTime) -> Complex64 {
    wightman_offdiag_at(t.s(), t.epsilon(), 0.0)
}

/// Wightman function between the two superposed locations,
/// `(1/4π) (δ² - (s - iε)²)^(-1/2)`, with `δ` measured as `δ/c_s`.
pub fn wightman_offdiag(t: RegularizedTime, geom: &DetectorGeometry) -> Complex64 {
    wightman_offdiag_at(t.s(), t.epsilon(), geom.delta_over_cs())
}

/// Unwrapped form of [`wightman_offdiag`] for quadrature loops. `epsilon`
/// must be positive and `delta_over_cs` non-negative; callers validate.
pub fn wightman_offdiag_at(s: f64, epsilon: f64, delta_over_cs: f64) -> Complex64 {
    let shifted = Complex64::new(s, -epsilon);
    let arg = Complex64::new(delta_over_cs * delta_over_cs, 0.0) - shifted * shifted;
    INV_FOUR_PI / arg.sqrt()
}

pub(crate) fn checked_delta(delta_over_cs: f64) -> Result<f64> {
    require_non_negative("delta_over_cs", delta_over_cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: f64, eps: f64) -> RegularizedTime {
        RegularizedTime::new(s, eps).unwrap()
    }

    #[test]
    fn diagonal_at_coincidence() {
        let w = wightman_diagonal(t(0.0, 1e-3));
        assert!((w.re - 79.57747154594767).abs() < 1e-10);
        assert_eq!(w.im, 0.0);
    }

    #[test]
    fn diagonal_far_magnitude() {
        let w = wightman_diagonal(t(1.0, 1e-12));
        assert!((w.norm() - INV_FOUR_PI).abs() < 1e-12);
        // Independent closed form: -i / (4π (s - iε)).
        let direct = Complex64::new(0.0, -INV_FOUR_PI) / Complex64::new(1.0, -1e-12);
        assert!((w - direct).norm() < 1e-15);
    }

    #[test]
    fn conjugate_symmetry() {
        for s in [0.3, 1.7] {
            let a = wightman_diagonal(t(s, 1e-4));
            let b = wightman_diagonal(t(-s, 1e-4));
            assert!((b - a.conj()).norm() <= 1e-12 * a.norm());
        }
    }

    #[test]
    fn offdiag_values() {
        let g = DetectorGeometry::from_separation(2.0, 1.0).unwrap();
        let w0 = wightman_offdiag(t(0.0, 1e-12), &g);
        assert!((w0.re - 0.039788735772973836).abs() < 1e-12);
        assert!(w0.im.abs() < 1e-12);

        // s = 3, δ = 2: δ² - (s - iε)² ≈ -5 + 6iε, whose principal root is ≈ i√5;
        // the real part is O(ε).
        let w = wightman_offdiag(t(3.0, 1e-6), &g);
        let expected = Complex64::new(0.0, -INV_FOUR_PI / 5f64.sqrt());
        assert!((w - expected).norm() < 1e-7, "{w}");
        assert!(w.re > 0.0 && w.re < 1e-7);
        assert!((w.norm() - 0.03558812717085885).abs() < 1e-8);
    }

    #[test]
    fn offdiag_reduces_to_diagonal() {
        let g = DetectorGeometry::from_separation(0.0, 1.0).unwrap();
        for s in [0.1, 1.0, 10.0] {
            let a = wightman_offdiag(t(s, 1e-4), &g);
            let b = wightman_diagonal(t(s, 1e-4));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn branch_consistency_grid() {
        for i in 0..100 {
            let s = -10.0 + 0.2 * i as f64 + 0.013;
            assert_eq!(wightman_offdiag_at(s, 1e-4, 0.0), wightman_diagonal(t(s, 1e-4)));
        }
    }

    proptest! {
        #[test]
        fn offdiag_conjugate_symmetry(s in -20.0f64..20.0, eps in 1e-6f64..1.0, d in 0.0f64..5.0) {
            let a = wightman_offdiag_at(s, eps, d);
            let b = wightman_offdiag_at(-s, eps, d);
            prop_assert!((b - a.conj()).norm() <= 1e-12 * a.norm());
        }
    }
}
