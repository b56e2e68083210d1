//! Heterodyne detection of the beamsplitter outputs: added-noise budget,
//! standard quantum limit, squeezed-light floor, power spectral densities,
//! signal-to-noise ratio and the superposition witness.

use crate::error::{require_finite, require_positive, Error, Result};
use crate::response::{sign, DetectorGeometry, ResponseModel};

/// `μ²` at the standard quantum limit, `2√(2/3)`.
pub fn mu_sq_sql() -> f64 {
    2.0 * (2.0f64 / 3.0).sqrt()
}

/// Added noise at the SQL for `ν < 0`, `√(3/2) - 1`.
pub fn sql_noise_floor() -> f64 {
    1.5f64.sqrt() - 1.0
}

/// Noise floor for `ν < 0` with ~3 dB of squeezing, `(√10 - 2)/6`.
pub fn squeezed_noise_floor() -> f64 {
    (10f64.sqrt() - 2.0) / 6.0
}

/// Fractional reduction of the `ν < 0` noise floor relative to the SQL.
pub fn squeezing_improvement() -> f64 {
    1.0 - squeezed_noise_floor() / sql_noise_floor()
}

/// The three added-noise contributions at fixed `μ²`, plus an optional
/// replacement floor for `ν < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseBudget {
    mu_sq: f64,
    /// Shot noise, `1/μ²`.
    pub imprecision: f64,
    /// Backaction-backaction correlations, `3μ²/8`.
    pub backaction: f64,
    pub squeezed_floor: Option<f64>,
}

impl NoiseBudget {
    pub fn new(mu_sq: f64) -> Result<Self> {
        require_positive("mu_sq", mu_sq)?;
        Ok(Self {
            mu_sq,
            imprecision: 1.0 / mu_sq,
            backaction: 3.0 * mu_sq / 8.0,
            squeezed_floor: None,
        })
    }

    /// Budget at the SQL coupling.
    pub fn sql() -> Self {
        Self::new(mu_sq_sql()).expect("SQL coupling is positive")
    }

    /// SQL coupling with the squeezed `ν < 0` floor. The `ν > 0` branch keeps
    /// its unsqueezed value.
    pub fn squeezed() -> Self {
        Self::sql().with_squeezed_floor(squeezed_noise_floor())
    }

    pub fn with_squeezed_floor(mut self, floor: f64) -> Self {
        self.squeezed_floor = Some(floor);
        self
    }

    pub fn mu_sq(&self) -> f64 {
        self.mu_sq
    }

    pub fn is_squeezed(&self) -> bool {
        self.squeezed_floor.is_some()
    }

    /// Backaction-imprecision cross term, `sgn(ν)`.
    pub fn cross(&self, nu: f64) -> f64 {
        sign(nu)
    }

    /// Unsqueezed sum of the three terms.
    pub fn unsqueezed_total(&self, nu: f64) -> f64 {
        self.imprecision + self.backaction + self.cross(nu)
    }

    pub fn total(&self, nu: f64) -> f64 {
        match self.squeezed_floor {
            Some(floor) if nu < 0.0 => floor,
            _ => self.unsqueezed_total(nu),
        }
    }
}

/// `N[ν; μ²] = 1/μ² + 3μ²/8 + sgn(ν)`.
pub fn added_noise(nu: f64, mu_sq: f64) -> Result<f64> {
    require_finite("nu", nu)?;
    Ok(NoiseBudget::new(mu_sq)?.total(nu))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqlOptimum {
    /// Closed-form minimizer `2√(2/3)`.
    pub mu_sq: f64,
    /// Golden-section minimizer over `[1e-3, 1e3]`.
    pub mu_sq_numeric: f64,
    /// Added noise at the optimum for `ν < 0`.
    pub noise_negative: f64,
    /// Added noise at the optimum for `ν > 0`.
    pub noise_positive: f64,
    /// `d²N/d(μ²)² = 2/μ⁶` at the optimum.
    pub curvature: f64,
}

/// Minimizes the `ν`-independent part `1/μ² + 3μ²/8` in closed form and by
/// golden-section search.
pub fn sql_optimize() -> SqlOptimum {
    let mu_sq = mu_sq_sql();
    let budget = NoiseBudget::new(mu_sq).expect("positive");
    SqlOptimum {
        mu_sq,
        mu_sq_numeric: golden_section_sql(1e-3, 1e3),
        noise_negative: budget.total(-1.0),
        noise_positive: budget.total(1.0),
        curvature: 2.0 / mu_sq.powi(3),
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Two-stage golden-section search for the SQL coupling.
///
/// Near its minimum `1/x + 3x/8 ≈ 1.22` is flat to within one ulp over a
/// window of width ~3e-8, so comparing raw values cannot localize the
/// minimizer to 1e-8. The second stage therefore minimizes the increment
/// `N(x) - N(x0) = (x - x0)(3/8 - 1/(x x0))` about the first-stage estimate
/// `x0`, which has no cancellation.
fn golden_section_sql(lo: f64, hi: f64) -> f64 {
    let noise = |x: f64| 1.0 / x + 3.0 * x / 8.0;
    let coarse = golden_section(noise, lo, hi, 1e-6);
    let increment = |x: f64| (x - coarse) * (0.375 - 1.0 / (x * coarse));
    golden_section(increment, coarse - 1e-5, coarse + 1e-5, 1e-13)
}

/// Beamsplitter output port that is heterodyned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Sum,
    Difference,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Sum => "sum",
            Branch::Difference => "difference",
        }
    }
}

/// Heterodyne PSD model for one output port.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdModel {
    pub branch: Branch,
    pub response: ResponseModel,
    pub noise: NoiseBudget,
    /// Local-oscillator shift `Δ_LO`, rad/s.
    pub heterodyne_shift: f64,
}

impl PsdModel {
    pub fn new(branch: Branch, response: ResponseModel, noise: NoiseBudget, heterodyne_shift: f64) -> Result<Self> {
        require_positive("delta_lo", heterodyne_shift)?;
        Ok(Self {
            branch,
            response,
            noise,
            heterodyne_shift,
        })
    }

    /// Same constants, other port.
    pub fn with_branch(mut self, branch: Branch) -> Self {
        self.branch = branch;
        self
    }

    pub fn signal(&self, nu: f64) -> f64 {
        match self.branch {
            Branch::Sum => self.response.total(nu),
            Branch::Difference => self.response.diff(nu),
        }
    }

    /// `S[Δ_LO - ν] = (μ²/2)(F_branch(ν) + N(ν))`, indexed by the detector gap ν.
    pub fn psd(&self, nu: f64) -> f64 {
        0.5 * self.noise.mu_sq() * (self.signal(nu) + self.noise.total(nu))
    }

    /// Same density indexed by the baseband analysis frequency `Δ_LO - ν`.
    pub fn psd_at_baseband(&self, analysis: f64) -> f64 {
        self.psd(self.heterodyne_shift - analysis)
    }
}

/// `(μ²/2)(F_branch(ν) + N(ν; μ²))`; with `squeezed` the `ν < 0` noise is the
/// squeezed floor.
pub fn psd(branch: Branch, nu: f64, mu_sq: f64, geom: &DetectorGeometry, squeezed: bool) -> Result<f64> {
    require_finite("nu", nu)?;
    let mut noise = NoiseBudget::new(mu_sq)?;
    if squeezed {
        noise = noise.with_squeezed_floor(squeezed_noise_floor());
    }
    let model = PsdModel {
        branch,
        response: ResponseModel::from_geometry(geom),
        noise,
        heterodyne_shift: 1.0,
    };
    Ok(model.psd(nu))
}

/// `F(ν) / N_floor` for the de-excitation band, with the squeezed floor or the
/// SQL floor.
pub fn snr(nu: f64, geom: &DetectorGeometry, squeezed: bool) -> Result<f64> {
    require_finite("nu", nu)?;
    if nu >= 0.0 {
        return Err(Error::NoDeexcitationSignal(nu));
    }
    let floor = if squeezed {
        squeezed_noise_floor()
    } else {
        sql_noise_floor()
    };
    Ok(ResponseModel::from_geometry(geom).total(nu) / floor)
}

/// Sum-port PSD minus difference-port PSD, `μ² Θ(-ν) J0(νδ/c_s)`.
pub fn witness(nu: f64, mu_sq: f64, geom: &DetectorGeometry) -> Result<f64> {
    require_finite("nu", nu)?;
    let model = PsdModel::new(Branch::Sum, ResponseModel::from_geometry(geom), NoiseBudget::new(mu_sq)?, 1.0)?;
    Ok(witness_of(&model, nu))
}

/// Witness for an arbitrary model (including single-trajectory mode).
pub fn witness_of(model: &PsdModel, nu: f64) -> f64 {
    model.with_branch(Branch::Sum).psd(nu) - model.with_branch(Branch::Difference).psd(nu)
}

/// Baseband analysis frequency `Δ_LO - ν` for detector gap `ν`.
pub fn heterodyne_frequency_map(nu: f64, delta_lo: f64) -> Result<f64> {
    require_finite("nu", nu)?;
    require_positive("delta_lo", delta_lo)?;
    Ok(delta_lo - nu)
}

/// Inverse of [`heterodyne_frequency_map`].
pub fn detector_gap_from_baseband(analysis: f64, delta_lo: f64) -> Result<f64> {
    require_finite("analysis", analysis)?;
    require_positive("delta_lo", delta_lo)?;
    Ok(delta_lo - analysis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::j0;
    use proptest::prelude::*;

    fn geom(d: f64) -> DetectorGeometry {
        DetectorGeometry::from_separation(d, 1.0).unwrap()
    }

    #[test]
    fn added_noise_values() {
        let sql = mu_sq_sql();
        assert!((sql - 1.632993161855452).abs() < 1e-15);
        assert!((added_noise(-1.0, sql).unwrap() - 0.22474487139158894).abs() < 1e-15);
        assert!((added_noise(1.0, sql).unwrap() - 2.224744871391589).abs() < 1e-15);
        assert_eq!(added_noise(-2.0, 1.0).unwrap(), 0.375);
        assert_eq!(added_noise(0.0, 1.0).unwrap(), 1.375);
        assert!(added_noise(-1.0, 0.0).is_err());
        assert!(added_noise(-1.0, -2.0).is_err());
    }

    #[test]
    fn sql_closed_form_and_numeric() {
        let opt = sql_optimize();
        assert!((opt.mu_sq - 1.632993161855452).abs() < 1e-15);
        assert!((opt.mu_sq_numeric - opt.mu_sq).abs() < 1e-8, "{}", opt.mu_sq_numeric);
        assert!((opt.noise_negative - 0.22474487139158894).abs() < 1e-12);
        assert!((opt.noise_positive - 2.224744871391589).abs() < 1e-12);
        assert!(opt.curvature > 0.0);
    }

    #[test]
    fn sql_curvature_matches_finite_difference() {
        let m = mu_sq_sql();
        let h = 1e-4;
        let f = |x: f64| 1.0 / x + 3.0 * x / 8.0;
        let fd = (f(m + h) - 2.0 * f(m) + f(m - h)) / (h * h);
        assert!((fd - sql_optimize().curvature).abs() < 1e-6);
    }

    #[test]
    fn squeezed_constants() {
        assert!((squeezed_noise_floor() - 0.19371294336139658).abs() < 1e-15);
        assert!((squeezing_improvement() - 0.13807624546912678).abs() < 1e-12);
        assert!(squeezed_noise_floor() < sql_noise_floor());
        let b = NoiseBudget::squeezed();
        assert_eq!(b.total(-0.5), squeezed_noise_floor());
        assert!((b.total(0.5) - 2.224744871391589).abs() < 1e-15);
    }

    #[test]
    fn psd_cases() {
        let g = geom(1.0);
        let mu = 0.8;
        let plateau = psd(Branch::Sum, 0.7, mu, &g, false).unwrap();
        assert!((plateau - 0.5 * mu * (1.0 / mu + 3.0 * mu / 8.0 + 1.0)).abs() < 1e-15);
        for nu in [-3.0, -1.0, -0.2] {
            let s = psd(Branch::Sum, nu, mu, &g, false).unwrap();
            let d = psd(Branch::Difference, nu, mu, &g, false).unwrap();
            assert!((s - d - mu * j0(nu)).abs() < 1e-14);
        }
        assert!(psd(Branch::Sum, -1.0, 0.0, &g, false).is_err());
    }

    #[test]
    fn snr_values() {
        let g = geom(1.0);
        let near_zero = snr(-1e-9, &g, true).unwrap();
        assert!((near_zero - 10.324555320336758).abs() < 1e-6);
        let edge = snr(-1.0, &g, true).unwrap();
        assert!((edge - 9.112440583099096).abs() < 1e-12);
        assert!((snr(-1.0, &g, false).unwrap() - 7.854229000324271).abs() < 1e-12);
        assert_eq!(snr(0.0, &g, true), Err(Error::NoDeexcitationSignal(0.0)));
        assert!(snr(1.0, &g, true).is_err());
    }

    #[test]
    fn snr_band_minimum_at_edge() {
        let g = geom(1.0);
        let values: Vec<f64> = (1..=1000).map(|i| snr(-(i as f64) / 1000.0, &g, true).unwrap()).collect();
        for w in values.windows(2) {
            assert!(w[1] <= w[0]);
        }
        assert!(*values.last().unwrap() > 9.0);
    }

    #[test]
    fn witness_cases() {
        let mu = 1.3;
        assert_eq!(witness(0.4, mu, &geom(2.0)).unwrap(), 0.0);
        assert!((witness(-0.4, mu, &geom(0.0)).unwrap() - mu).abs() < 1e-15);
        let single = PsdModel::new(
            Branch::Sum,
            ResponseModel::new(1.0).unwrap().single_trajectory(),
            NoiseBudget::new(mu).unwrap(),
            5.0,
        )
        .unwrap();
        for nu in [-4.0, -1.0, -0.01, 0.0, 0.3] {
            assert_eq!(witness_of(&single, nu), 0.0);
        }
    }

    #[test]
    fn heterodyne_map_cases() {
        assert_eq!(heterodyne_frequency_map(0.0, 7.0).unwrap(), 7.0);
        assert_eq!(heterodyne_frequency_map(7.0, 7.0).unwrap(), 0.0);
        assert!(heterodyne_frequency_map(1.0, 0.0).is_err());
        let m = PsdModel::new(Branch::Sum, ResponseModel::new(1.0).unwrap(), NoiseBudget::sql(), 7.0).unwrap();
        assert_eq!(m.psd_at_baseband(8.0), m.psd(-1.0));
    }

    proptest! {
        #[test]
        fn budget_decomposes(nu in -100.0f64..100.0, mu_sq in 1e-3f64..1e3) {
            let b = NoiseBudget::new(mu_sq).unwrap();
            let direct = 1.0 / mu_sq + 3.0 * mu_sq / 8.0 + sign(nu);
            prop_assert_eq!(b.total(nu), b.imprecision + b.backaction + b.cross(nu));
            prop_assert!((b.total(nu) - direct).abs() <= 1e-12 * direct.abs().max(1.0));
        }

        #[test]
        fn psd_positive(nu in -50.0f64..50.0, mu_sq in 1e-3f64..1e3, d in 0.0f64..10.0, sq in any::<bool>()) {
            prop_assume!(nu != 0.0);
            for branch in [Branch::Sum, Branch::Difference] {
                prop_assert!(psd(branch, nu, mu_sq, &geom(d), sq).unwrap() > 0.0);
            }
        }

        #[test]
        fn witness_identity(nu in -50.0f64..50.0, mu_sq in 1e-2f64..1e2, d in 0.0f64..10.0) {
            let w = witness(nu, mu_sq, &geom(d)).unwrap();
            let expected = mu_sq * crate::response::heaviside(-nu) * j0(nu * d);
            prop_assert!((w - expected).abs() <= 1e-12 * mu_sq.max(1.0));
            if nu > 0.0 {
                prop_assert_eq!(w, 0.0);
            }
        }

        #[test]
        fn heterodyne_round_trip(nu in -1e9f64..1e9, lo in 1.0f64..1e9) {
            let a = heterodyne_frequency_map(nu, lo).unwrap();
            prop_assert_eq!(detector_gap_from_baseband(a, lo).unwrap(), lo - (lo - nu));
            prop_assert!((detector_gap_from_baseband(a, lo).unwrap() - nu).abs() <= 1e-15 * (lo.abs() + nu.abs()));
        }
    }
}
