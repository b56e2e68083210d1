//! Python bindings. The extension module is importable as `udwsim`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use udwsim::analog;
use udwsim::detection::{self, Branch, NoiseBudget};
use udwsim::response::{self, ComponentKind, EpsilonLadder, SwitchingWindow};
use udwsim::sim;

type Columns4 = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

fn err(e: udwsim::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn branch(name: &str) -> PyResult<Branch> {
    match name {
        "sum" => Ok(Branch::Sum),
        "difference" | "diff" => Ok(Branch::Difference),
        other => Err(PyValueError::new_err(format!(
            "branch must be 'sum' or 'difference', got '{other}'"
        ))),
    }
}

#[pyfunction]
fn bessel_j0(x: f64) -> PyResult<f64> {
    udwsim::bessel_j0(x).map_err(err)
}

#[pyfunction]
fn response_diag(nu: f64) -> f64 {
    response::response_diag(nu)
}

#[pyfunction]
fn response_offdiag(nu: f64, delta_over_cs: f64) -> PyResult<f64> {
    response::response_offdiag(nu, delta_over_cs).map_err(err)
}

#[pyfunction]
fn total_response(nu: f64, delta_over_cs: f64) -> PyResult<f64> {
    response::total_response(nu, delta_over_cs).map_err(err)
}

#[pyfunction]
fn diff_response(nu: f64, delta_over_cs: f64) -> PyResult<f64> {
    response::diff_response(nu, delta_over_cs).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (nu, delta_over_cs, n_nodes = 256))]
fn response_offdiag_contour(nu: f64, delta_over_cs: f64, n_nodes: usize) -> PyResult<f64> {
    response::response_offdiag_numeric_contour(nu, delta_over_cs, n_nodes).map_err(err)
}

/// ε-regularized Fourier integral, Richardson-extrapolated to ε → 0.
#[pyfunction]
#[pyo3(signature = (nu, delta_over_cs, t_cutoff = None))]
fn response_offdiag_fourier(nu: f64, delta_over_cs: f64, t_cutoff: Option<f64>) -> PyResult<f64> {
    let t = t_cutoff.unwrap_or(400.0 * delta_over_cs.max(1.0));
    response::response_numeric_extrapolated(nu, delta_over_cs, EpsilonLadder::default(), t).map_err(err)
}

/// Returns `(P, P / (T√π))` for one component with a Gaussian window of width `t`.
#[pyfunction]
#[pyo3(signature = (nu, width, delta_over_cs, component = "diagonal"))]
fn transition_probability(nu: f64, width: f64, delta_over_cs: f64, component: &str) -> PyResult<(f64, f64)> {
    let kind = match component {
        "diagonal" => ComponentKind::Diagonal,
        "offdiagonal" | "off_diagonal" => ComponentKind::OffDiagonal,
        other => return Err(PyValueError::new_err(format!("unknown component '{other}'"))),
    };
    let window = SwitchingWindow::gaussian(width).map_err(err)?;
    let p = response::transition_probability(nu, window, delta_over_cs, kind).map_err(err)?;
    Ok((p.value, p.rate))
}

#[pyfunction]
fn mu_sq_sql() -> f64 {
    detection::mu_sq_sql()
}

#[pyfunction]
fn sql_noise_floor() -> f64 {
    detection::sql_noise_floor()
}

#[pyfunction]
fn squeezed_noise_floor() -> f64 {
    detection::squeezed_noise_floor()
}

#[pyfunction]
fn squeezing_improvement() -> f64 {
    detection::squeezing_improvement()
}

#[pyfunction]
fn added_noise(nu: f64, mu_sq: f64) -> PyResult<f64> {
    detection::added_noise(nu, mu_sq).map_err(err)
}

#[pyfunction]
fn sql_optimize(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let o = detection::sql_optimize();
    let d = PyDict::new(py);
    d.set_item("mu_sq", o.mu_sq)?;
    d.set_item("mu_sq_numeric", o.mu_sq_numeric)?;
    d.set_item("noise_negative", o.noise_negative)?;
    d.set_item("noise_positive", o.noise_positive)?;
    d.set_item("curvature", o.curvature)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (branch_name, nu, mu_sq, delta_over_cs, squeezed = false))]
fn psd(branch_name: &str, nu: f64, mu_sq: f64, delta_over_cs: f64, squeezed: bool) -> PyResult<f64> {
    let g = response::DetectorGeometry::from_separation(delta_over_cs, 1.0).map_err(err)?;
    detection::psd(branch(branch_name)?, nu, mu_sq, &g, squeezed).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (nu, delta_over_cs, squeezed = true))]
fn snr(nu: f64, delta_over_cs: f64, squeezed: bool) -> PyResult<f64> {
    let g = response::DetectorGeometry::from_separation(delta_over_cs, 1.0).map_err(err)?;
    detection::snr(nu, &g, squeezed).map_err(err)
}

#[pyfunction]
fn witness(nu: f64, mu_sq: f64, delta_over_cs: f64) -> PyResult<f64> {
    let g = response::DetectorGeometry::from_separation(delta_over_cs, 1.0).map_err(err)?;
    detection::witness(nu, mu_sq, &g).map_err(err)
}

#[pyclass(name = "DetectorGeometry", frozen)]
struct PyGeometry(response::DetectorGeometry);

#[pymethods]
impl PyGeometry {
    #[new]
    #[pyo3(signature = (delta, c_s = 1.0))]
    fn new(delta: f64, c_s: f64) -> PyResult<Self> {
        response::DetectorGeometry::from_separation(delta, c_s).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_points(x1: [f64; 2], x2: [f64; 2], c_s: f64) -> PyResult<Self> {
        response::DetectorGeometry::new(x1, x2, c_s).map(Self).map_err(err)
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.0.delta()
    }

    #[getter]
    fn c_s(&self) -> f64 {
        self.0.c_s()
    }

    #[getter]
    fn delta_over_cs(&self) -> f64 {
        self.0.delta_over_cs()
    }

    fn __repr__(&self) -> String {
        format!("DetectorGeometry(delta={}, c_s={})", self.0.delta(), self.0.c_s())
    }
}

#[pyclass(name = "ResponseModel", frozen)]
struct PyResponseModel(response::ResponseModel);

#[pymethods]
impl PyResponseModel {
    #[new]
    #[pyo3(signature = (delta_over_cs, superposition = true))]
    fn new(delta_over_cs: f64, superposition: bool) -> PyResult<Self> {
        let m = response::ResponseModel::new(delta_over_cs).map_err(err)?;
        Ok(Self(m.with_superposition(superposition)))
    }

    fn total(&self, nu: f64) -> f64 {
        self.0.total(nu)
    }

    fn diff(&self, nu: f64) -> f64 {
        self.0.diff(nu)
    }

    fn diagonal(&self, nu: f64) -> f64 {
        self.0.diagonal(nu)
    }

    fn off_diagonal(&self, nu: f64) -> f64 {
        self.0.off_diagonal(nu)
    }

    /// `[[F11, F12], [F21, F22]]`.
    fn spectral_matrix(&self, nu: f64) -> [[f64; 2]; 2] {
        self.0.spectral_matrix(nu)
    }
}

/// Heterodyne PSD model for one port.
#[pyclass(name = "PsdModel", frozen)]
struct PyPsdModel(detection::PsdModel);

#[pymethods]
impl PyPsdModel {
    #[new]
    #[pyo3(signature = (branch_name, delta_over_cs, mu_sq = None, squeezed = false, delta_lo = 10.0, single_trajectory = false))]
    fn new(
        branch_name: &str,
        delta_over_cs: f64,
        mu_sq: Option<f64>,
        squeezed: bool,
        delta_lo: f64,
        single_trajectory: bool,
    ) -> PyResult<Self> {
        let mut noise = NoiseBudget::new(mu_sq.unwrap_or_else(detection::mu_sq_sql)).map_err(err)?;
        if squeezed {
            noise = noise.with_squeezed_floor(detection::squeezed_noise_floor());
        }
        let response = response::ResponseModel::new(delta_over_cs)
            .map_err(err)?
            .with_superposition(!single_trajectory);
        detection::PsdModel::new(branch(branch_name)?, response, noise, delta_lo)
            .map(Self)
            .map_err(err)
    }

    fn psd(&self, nu: f64) -> f64 {
        self.0.psd(nu)
    }

    fn signal(&self, nu: f64) -> f64 {
        self.0.signal(nu)
    }

    fn noise(&self, nu: f64) -> f64 {
        self.0.noise.total(nu)
    }

    fn psd_at_baseband(&self, analysis: f64) -> f64 {
        self.0.psd_at_baseband(analysis)
    }

    fn witness(&self, nu: f64) -> f64 {
        detection::witness_of(&self.0, nu)
    }

    /// Synthesizes a photocurrent record and returns its Welch estimate as
    /// `(angular_frequencies, density, n_segments)`.
    #[pyo3(signature = (n_samples, sample_rate, segment_len, seed))]
    fn simulate(&self, n_samples: usize, sample_rate: f64, segment_len: usize, seed: u64) -> PyResult<(Vec<f64>, Vec<f64>, usize)> {
        let record = sim::synthesize_photocurrent(&self.0, n_samples, sample_rate, seed).map_err(err)?;
        let est = sim::welch_psd(&record, segment_len).map_err(err)?;
        Ok((est.angular_frequencies(), est.density, est.n_segments))
    }

    /// Monte-Carlo witness: `(nu, estimate, analytic, std_error)`.
    #[pyo3(signature = (n_samples, sample_rate, segment_len, seed))]
    fn monte_carlo_witness(
        &self,
        n_samples: usize,
        sample_rate: f64,
        segment_len: usize,
        seed: u64,
    ) -> PyResult<Columns4> {
        let spec = sim::RecordSpec::new(n_samples, sample_rate, seed).map_err(err)?;
        let w = sim::monte_carlo_witness(&self.0, spec, segment_len).map_err(err)?;
        let c = w.comparison;
        Ok((c.nu, c.estimate, c.analytic, c.std_error))
    }
}

#[pyclass(name = "CondensateLaserParams")]
struct PyParams(analog::CondensateLaserParams);

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (mass, density, omega0, beam_radius, g2d = None, alpha_r = None, alpha = None))]
    fn new(
        mass: f64,
        density: f64,
        omega0: f64,
        beam_radius: f64,
        g2d: Option<f64>,
        alpha_r: Option<f64>,
        alpha: Option<f64>,
    ) -> PyResult<Self> {
        let p = analog::CondensateLaserParams {
            mass,
            density,
            g2d,
            omega0,
            alpha_r,
            alpha,
            beam_radius,
        };
        p.validate().map_err(err)?;
        Ok(Self(p))
    }

    #[staticmethod]
    fn cs133() -> Self {
        Self(analog::CondensateLaserParams::cs133())
    }

    #[getter]
    fn mass(&self) -> f64 {
        self.0.mass
    }

    #[getter]
    fn density(&self) -> f64 {
        self.0.density
    }

    #[getter]
    fn get_g2d(&self) -> Option<f64> {
        self.0.g2d
    }

    #[setter]
    fn set_g2d(&mut self, value: Option<f64>) {
        self.0.g2d = value;
    }

    #[getter]
    fn get_alpha_r(&self) -> Option<f64> {
        self.0.alpha_r
    }

    #[setter]
    fn set_alpha_r(&mut self, value: Option<f64>) {
        self.0.alpha_r = value;
    }

    #[getter]
    fn get_alpha(&self) -> Option<f64> {
        self.0.alpha
    }

    #[setter]
    fn set_alpha(&mut self, value: Option<f64>) {
        self.0.alpha = value;
    }

    fn sound_speed(&self) -> PyResult<f64> {
        analog::sound_speed(&self.0).map_err(err)
    }

    fn coupling_mu(&self) -> PyResult<f64> {
        analog::coupling_mu(&self.0).map_err(err)
    }
}

#[pymodule]
#[pyo3(name = "udwsim")]
fn udwsim_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(bessel_j0, m)?)?;
    m.add_function(wrap_pyfunction!(response_diag, m)?)?;
    m.add_function(wrap_pyfunction!(response_offdiag, m)?)?;
    m.add_function(wrap_pyfunction!(total_response, m)?)?;
    m.add_function(wrap_pyfunction!(diff_response, m)?)?;
    m.add_function(wrap_pyfunction!(response_offdiag_contour, m)?)?;
    m.add_function(wrap_pyfunction!(response_offdiag_fourier, m)?)?;
    m.add_function(wrap_pyfunction!(transition_probability, m)?)?;
    m.add_function(wrap_pyfunction!(mu_sq_sql, m)?)?;
    m.add_function(wrap_pyfunction!(sql_noise_floor, m)?)?;
    m.add_function(wrap_pyfunction!(squeezed_noise_floor, m)?)?;
    m.add_function(wrap_pyfunction!(squeezing_improvement, m)?)?;
    m.add_function(wrap_pyfunction!(added_noise, m)?)?;
    m.add_function(wrap_pyfunction!(sql_optimize, m)?)?;
    m.add_function(wrap_pyfunction!(psd, m)?)?;
    m.add_function(wrap_pyfunction!(snr, m)?)?;
    m.add_function(wrap_pyfunction!(witness, m)?)?;
    m.add_class::<PyGeometry>()?;
    m.add_class::<PyResponseModel>()?;
    m.add_class::<PyPsdModel>()?;
    m.add_class::<PyParams>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
