//! Python bindings for `nftaper`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nftaper::experiment::{run_table2, ExperimentConfig, Table2Report};
use nftaper::pattern::{
    default_angle_grid, default_range_grid, DEFAULT_ANGLE_SAMPLES, DEFAULT_RANGE_SAMPLES,
    DEFAULT_RANGE_SPAN,
};
use nftaper::slepian::{GridSpec, RangeSpacing, SlepianOptions};
use nftaper::windows::NfIndexing;
use nftaper::{AngleCutMode, BeamDepth, FocusPoint, MetricOptions, PatternCut, SteeringModel};
use num_complex::Complex64;

fn to_py(e: nftaper::Error) -> PyErr {
    use nftaper::Error::*;
    match e {
        InvalidConfig(_) | Domain(_) | Grid(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn steering_model(name: &str) -> PyResult<SteeringModel> {
    match name {
        "exact" => Ok(SteeringModel::Exact),
        "fresnel" => Ok(SteeringModel::Fresnel),
        _ => Err(PyValueError::new_err(format!(
            "unknown steering model {name:?}; use \"exact\" or \"fresnel\""
        ))),
    }
}

#[pyclass(name = "ArrayConfig", frozen, from_py_object, module = "nftaper_py")]
#[derive(Clone, Copy)]
struct PyArrayConfig(nftaper::ArrayConfig);

#[pymethods]
impl PyArrayConfig {
    /// Uniform linear array; half-wavelength spacing when `spacing_m` is omitted.
    #[new]
    #[pyo3(signature = (elements, frequency_hz, spacing_m=None))]
    fn new(elements: usize, frequency_hz: f64, spacing_m: Option<f64>) -> PyResult<Self> {
        let config = match spacing_m {
            Some(d) => nftaper::ArrayConfig::new(elements, frequency_hz, d),
            None => nftaper::ArrayConfig::half_wavelength(elements, frequency_hz),
        };
        config.map(Self).map_err(to_py)
    }

    #[getter]
    fn elements(&self) -> usize {
        self.0.element_count()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.0.spacing()
    }

    #[getter]
    fn wavelength(&self) -> f64 {
        self.0.wavelength()
    }

    #[getter]
    fn aperture_length(&self) -> f64 {
        self.0.aperture_length()
    }

    #[getter]
    fn rayleigh_distance(&self) -> f64 {
        self.0.rayleigh_distance()
    }

    #[getter]
    fn fresnel_inner(&self) -> f64 {
        self.0.field_bounds().fresnel_inner
    }

    /// Near-field steering vector at `(theta, r)`.
    #[pyo3(signature = (theta, r, model="exact"))]
    fn steering(&self, theta: f64, r: f64, model: &str) -> PyResult<Vec<Complex64>> {
        nftaper::nf_steering(&self.0, steering_model(model)?, theta, r).map_err(to_py)
    }

    /// Far-field steering vector at `theta`.
    fn far_field_steering(&self, theta: f64) -> PyResult<Vec<Complex64>> {
        nftaper::ff_steering(&self.0, theta).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "ArrayConfig(elements={}, frequency_hz={}, spacing_m={})",
            self.0.element_count(),
            self.0.carrier_frequency(),
            self.0.spacing()
        )
    }
}

#[pyclass(name = "Taper", frozen, skip_from_py_object, module = "nftaper_py")]
#[derive(Clone)]
struct PyTaper(nftaper::Taper);

#[pymethods]
impl PyTaper {
    /// Nonnegative weights, scaled so the largest is one.
    #[new]
    fn new(weights: Vec<f64>) -> PyResult<Self> {
        nftaper::Taper::peak_one(weights).map(Self).map_err(to_py)
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.0.weights().to_vec()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Taper(len={})", self.0.len())
    }
}

#[pyclass(name = "PatternCut", frozen, module = "nftaper_py")]
struct PyPatternCut(PatternCut);

#[pymethods]
impl PyPatternCut {
    /// Angles in radians or ranges in meters.
    #[getter]
    fn coordinates(&self) -> Vec<f64> {
        self.0.coordinates.clone()
    }

    #[getter]
    fn gain_linear(&self) -> Vec<f64> {
        self.0.gain_linear.clone()
    }

    #[getter]
    fn gain_db(&self) -> Vec<f64> {
        self.0.gain_db.clone()
    }

    /// PSLL, ISLL (dB, `None` when undefined) and half-power width.
    #[pyo3(signature = (prominence_db=nftaper::metrics::DEFAULT_PROMINENCE_DB))]
    fn metrics<'py>(&self, py: Python<'py>, prominence_db: f64) -> PyResult<Bound<'py, PyDict>> {
        let options = MetricOptions {
            prominence_db,
            ..MetricOptions::default()
        };
        let r = nftaper::analyze_cut(&self.0, &options).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("psll_db", r.psll_db)?;
        d.set_item("isll_db", r.isll_db)?;
        d.set_item("width", r.width)?;
        d.set_item("mainlobe", (r.mainlobe.lower_bound, r.mainlobe.upper_bound))?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

#[pyclass(name = "SlepianDesign", frozen, module = "nftaper_py")]
struct PySlepianDesign(nftaper::SlepianDesign);

#[pymethods]
impl PySlepianDesign {
    #[getter]
    fn taper(&self) -> PyTaper {
        PyTaper(self.0.taper.clone())
    }

    /// Concentration of the complex dominant eigenvector.
    #[getter]
    fn j(&self) -> f64 {
        self.0.j
    }

    #[getter]
    fn leading_eigenvalues(&self) -> Vec<f64> {
        self.0.leading_eigenvalues.clone()
    }

    /// Mainlobe region as `(omega_min, omega_max, r_lo, r_hi)`.
    #[getter]
    fn mainlobe(&self) -> (f64, f64, f64, f64) {
        let r = self.0.mainlobe.region;
        (r.omega_min, r.omega_max, r.r_lo, r.r_hi)
    }

    #[getter]
    fn total(&self) -> (f64, f64, f64, f64) {
        let r = self.0.total;
        (r.omega_min, r.omega_max, r.r_lo, r.r_hi)
    }

    #[getter]
    fn max_residual(&self) -> f64 {
        self.0.max_residual
    }
}

fn focus(theta: f64, r: f64) -> PyResult<FocusPoint> {
    FocusPoint::new(theta, r).map_err(to_py)
}

#[pyfunction]
fn uniform(n: usize) -> PyResult<PyTaper> {
    nftaper::windows::uniform(n).map(PyTaper).map_err(to_py)
}

#[pyfunction]
fn hamming(n: usize) -> PyResult<PyTaper> {
    nftaper::windows::hamming(n).map(PyTaper).map_err(to_py)
}

/// Near-field Hamming window; `indexing` is `"integer"` or `"normalized"`.
#[pyfunction]
#[pyo3(signature = (n, indexing="integer"))]
fn nf_hamming(n: usize, indexing: &str) -> PyResult<PyTaper> {
    let indexing = match indexing {
        "integer" => NfIndexing::Integer,
        "normalized" => NfIndexing::Normalized,
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown indexing {indexing:?}"
            )))
        }
    };
    nftaper::windows::nf_hamming(n, indexing)
        .map(PyTaper)
        .map_err(to_py)
}

/// Classic Slepian window and its concentration.
#[pyfunction]
fn classic_slepian(n: usize, w_ratio: f64) -> PyResult<(PyTaper, f64)> {
    let (t, lambda) = nftaper::windows::classic_slepian(n, w_ratio).map_err(to_py)?;
    Ok((PyTaper(t), lambda))
}

/// Near-field Slepian taper focused at `(theta, r)`.
#[pyfunction]
#[pyo3(signature = (config, theta, r, k_angle=1.0, k_range=1.0, a_grid=(512, 512), b_grid=(1024, 2048)))]
fn slepian_taper(
    py: Python<'_>,
    config: PyArrayConfig,
    theta: f64,
    r: f64,
    k_angle: f64,
    k_range: f64,
    a_grid: (usize, usize),
    b_grid: (usize, usize),
) -> PyResult<PySlepianDesign> {
    let f = focus(theta, r)?;
    let options = SlepianOptions {
        a_grid: GridSpec::new(a_grid.0, a_grid.1, RangeSpacing::Linear),
        b_grid: GridSpec::new(b_grid.0, b_grid.1, RangeSpacing::Logarithmic),
        ..SlepianOptions::default()
    };
    py.detach(|| nftaper::slepian_taper(&config.0, f, k_angle, k_range, &options))
        .map(PySlepianDesign)
        .map_err(to_py)
}

/// Normalized angle cut; `grid` defaults to 8192 midpoints over `[-π/2, π/2]`.
#[pyfunction]
#[pyo3(signature = (config, taper, theta, r, grid=None, model="exact", ring=false))]
fn angle_cut(
    py: Python<'_>,
    config: PyArrayConfig,
    taper: &PyTaper,
    theta: f64,
    r: f64,
    grid: Option<Vec<f64>>,
    model: &str,
    ring: bool,
) -> PyResult<PyPatternCut> {
    let f = focus(theta, r)?;
    let model = steering_model(model)?;
    let grid = grid.unwrap_or_else(|| default_angle_grid(DEFAULT_ANGLE_SAMPLES));
    let mode = if ring {
        AngleCutMode::DistanceRing
    } else {
        AngleCutMode::FixedRange
    };
    py.detach(|| nftaper::angle_cut(&config.0, &taper.0, f, model, &grid, mode))
        .map(PyPatternCut)
        .map_err(to_py)
}

/// Normalized range cut; `grid` defaults to log samples over `[r/5, 5r]`.
#[pyfunction]
#[pyo3(signature = (config, taper, theta, r, grid=None, model="exact"))]
fn range_cut(
    py: Python<'_>,
    config: PyArrayConfig,
    taper: &PyTaper,
    theta: f64,
    r: f64,
    grid: Option<Vec<f64>>,
    model: &str,
) -> PyResult<PyPatternCut> {
    let f = focus(theta, r)?;
    let model = steering_model(model)?;
    let grid = grid.unwrap_or_else(|| {
        default_range_grid(&config.0, f, DEFAULT_RANGE_SAMPLES, DEFAULT_RANGE_SPAN)
    });
    py.detach(|| nftaper::range_cut(&config.0, &taper.0, f, model, &grid))
        .map(PyPatternCut)
        .map_err(to_py)
}

#[pyfunction]
fn fresnel_c(x: f64) -> f64 {
    nftaper::fresnel_c(x)
}

#[pyfunction]
fn fresnel_s(x: f64) -> f64 {
    nftaper::fresnel_s(x)
}

#[pyfunction]
fn fresnel_range_gain(gamma: f64) -> f64 {
    nftaper::fresnel_range_gain(gamma)
}

#[pyfunction]
fn alpha_3db() -> f64 {
    nftaper::alpha_3db()
}

/// Analytic half-power beamwidth in radians.
#[pyfunction]
fn hpbw_analytic(config: PyArrayConfig, theta: f64) -> PyResult<f64> {
    nftaper::hpbw_analytic(&config.0, theta).map_err(to_py)
}

/// Analytic half-power range interval `(r_min, r_max)`; `r_max` is infinite past the limit.
#[pyfunction]
fn hpbd_analytic(config: PyArrayConfig, theta: f64, r: f64) -> PyResult<(f64, f64)> {
    let bd: BeamDepth = nftaper::hpbd_analytic(&config.0, focus(theta, r)?);
    Ok((bd.r_min(), bd.r_max()))
}

fn table2(py: Python<'_>, config_json: Option<&str>) -> PyResult<Table2Report> {
    let config = match config_json {
        Some(text) => {
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?
        }
        None => ExperimentConfig::default(),
    };
    py.detach(|| run_table2(&config)).map_err(to_py)
}

/// Runs the window comparison and returns one dict per window.
#[pyfunction]
#[pyo3(signature = (config_json=None))]
fn compare_windows<'py>(
    py: Python<'py>,
    config_json: Option<&str>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let report = table2(py, config_json)?;
    report
        .per_window
        .iter()
        .map(|w| {
            let d = PyDict::new(py);
            d.set_item("name", &w.name)?;
            d.set_item("error", &w.error)?;
            d.set_item(
                "weights",
                w.taper.as_ref().map(|t| t.taper.weights().to_vec()),
            )?;
            if let Some(m) = &w.metrics {
                d.set_item("psll_range_db", m.psll_range_db)?;
                d.set_item("psll_angle_db", m.psll_angle_db)?;
                d.set_item("isll_range_db", m.isll_range_db)?;
                d.set_item("isll_angle_db", m.isll_angle_db)?;
                d.set_item("bd_m", m.bd_m)?;
                d.set_item("bw_deg", m.bw_deg)?;
            }
            Ok(d)
        })
        .collect()
}

/// Runs the window comparison and returns the text table.
#[pyfunction]
#[pyo3(signature = (config_json=None))]
fn compare_windows_text(py: Python<'_>, config_json: Option<&str>) -> PyResult<String> {
    Ok(table2(py, config_json)?.to_text())
}

#[pymodule]
fn nftaper_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyArrayConfig>()?;
    m.add_class::<PyTaper>()?;
    m.add_class::<PyPatternCut>()?;
    m.add_class::<PySlepianDesign>()?;
    m.add_function(wrap_pyfunction!(uniform, m)?)?;
    m.add_function(wrap_pyfunction!(hamming, m)?)?;
    m.add_function(wrap_pyfunction!(nf_hamming, m)?)?;
    m.add_function(wrap_pyfunction!(classic_slepian, m)?)?;
    m.add_function(wrap_pyfunction!(slepian_taper, m)?)?;
    m.add_function(wrap_pyfunction!(angle_cut, m)?)?;
    m.add_function(wrap_pyfunction!(range_cut, m)?)?;
    m.add_function(wrap_pyfunction!(fresnel_c, m)?)?;
    m.add_function(wrap_pyfunction!(fresnel_s, m)?)?;
    m.add_function(wrap_pyfunction!(fresnel_range_gain, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_3db, m)?)?;
    m.add_function(wrap_pyfunction!(hpbw_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(hpbd_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(compare_windows, m)?)?;
    m.add_function(wrap_pyfunction!(compare_windows_text, m)?)?;
    Ok(())
}
