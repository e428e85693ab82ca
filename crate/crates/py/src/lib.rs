//! Python bindings: special functions, samplers, thermodynamics, the limit
//! law and the critical-line evaluator.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

use freezelab_core::cuepoly::{self, EigenphaseSet};
use freezelab_core::extremes;
use freezelab_core::fourierfield::{self, FourierField};
use freezelab_core::rng::child_stream;
use freezelab_core::specialfn;
use freezelab_core::thermo::{self, FreezeCurve};
use freezelab_core::zetaline::{self, ZetaInterval};
use freezelab_core::{Error, FieldSource, Landscape};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Precision(_) | Error::Divergence { .. } | Error::Pole { .. } => PyArithmeticError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn model(name: &str) -> PyResult<FieldSource> {
    match name {
        "cue" => Ok(FieldSource::Cue),
        "fourier" => Ok(FieldSource::Fourier),
        other => Err(PyValueError::new_err(format!("model must be 'cue' or 'fourier', got {other:?}"))),
    }
}

#[pyfunction]
fn ln_gamma(x: f64) -> PyResult<f64> {
    specialfn::ln_gamma(x).map_err(py_err)
}

#[pyfunction]
fn gamma_fn(x: f64) -> PyResult<f64> {
    specialfn::gamma_fn(x).map_err(py_err)
}

#[pyfunction]
fn ln_barnes_g(x: f64) -> PyResult<f64> {
    specialfn::ln_barnes_g(x).map_err(py_err)
}

#[pyfunction]
fn bessel_k(order: i32, x: f64) -> PyResult<f64> {
    specialfn::bessel_k(order, x).map_err(py_err)
}

/// Eigenphases of one CUE matrix.
#[pyclass(name = "EigenphaseSet", module = "freezelab")]
struct PyEigenphaseSet {
    inner: EigenphaseSet,
}

#[pymethods]
impl PyEigenphaseSet {
    #[new]
    fn new(phases: Vec<f64>) -> PyResult<Self> {
        Ok(PyEigenphaseSet {
            inner: EigenphaseSet::from_phases(phases).map_err(py_err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn phases(&self) -> Vec<f64> {
        self.inner.phases.clone()
    }

    fn log_abs_p(&self, theta: f64) -> f64 {
        self.inner.log_abs_p(theta)
    }

    /// `V = -2 log |p|` on the half-cell-offset grid of `m` points.
    fn field_on_grid(&self, m: usize) -> PyResult<Vec<f64>> {
        Ok(cuepoly::field_on_grid(&self.inner, m).map_err(py_err)?.values)
    }

    /// `(theta, max log |p|)` from a grid of `m` points and refinement.
    #[pyo3(signature = (m, refine = cuepoly::DEFAULT_REFINE_TOL))]
    fn max_log_abs_p(&self, m: usize, refine: f64) -> PyResult<(f64, f64)> {
        let grid = cuepoly::field_on_grid(&self.inner, m).map_err(py_err)?;
        cuepoly::max_log_abs_p(&self.inner, &grid, refine).map_err(py_err)
    }

    fn __len__(&self) -> usize {
        self.inner.n
    }

    fn __repr__(&self) -> String {
        format!("EigenphaseSet(n={})", self.inner.n)
    }
}

/// Haar CUE eigenphases from `child_stream(seed, tag, index)`.
#[pyfunction]
#[pyo3(signature = (n, seed, tag = "sample", index = 0))]
fn sample_cue(n: usize, seed: u64, tag: &str, index: u64) -> PyResult<PyEigenphaseSet> {
    let mut rng = child_stream(seed, tag, index);
    Ok(PyEigenphaseSet {
        inner: cuepoly::sample_cue(n, &mut rng).map_err(py_err)?,
    })
}

/// Truncated random Fourier series with log-correlated covariance.
#[pyclass(name = "FourierField", module = "freezelab")]
struct PyFourierField {
    inner: FourierField,
}

#[pymethods]
impl PyFourierField {
    #[getter]
    fn n_modes(&self) -> usize {
        self.inner.n_modes
    }

    fn potential(&self, theta: f64) -> f64 {
        self.inner.potential(theta)
    }

    fn field_on_grid(&self, m: usize) -> PyResult<Vec<f64>> {
        let grid = freezelab_core::field::TrigGrid::new(m);
        Ok(fourierfield::fourier_field_on_grid(&self.inner, &grid)
            .map_err(py_err)?
            .values)
    }

    #[staticmethod]
    fn exact_covariance(n_modes: usize, delta: f64) -> f64 {
        FourierField::exact_covariance(n_modes, delta)
    }

    fn __repr__(&self) -> String {
        format!("FourierField(n_modes={})", self.inner.n_modes)
    }
}

#[pyfunction]
#[pyo3(signature = (n_modes, seed, tag = "sample", index = 0))]
fn sample_fourier_field(n_modes: usize, seed: u64, tag: &str, index: u64) -> PyResult<PyFourierField> {
    let mut rng = child_stream(seed, tag, index);
    Ok(PyFourierField {
        inner: fourierfield::sample_fourier_field(n_modes, &mut rng).map_err(py_err)?,
    })
}

/// `-f(beta)` with standard errors over an ensemble.
#[pyclass(name = "FreezeCurve", module = "freezelab", get_all)]
struct PyFreezeCurve {
    betas: Vec<f64>,
    minus_f: Vec<f64>,
    stderr: Vec<f64>,
    n_param: usize,
    samples: usize,
}

impl From<FreezeCurve> for PyFreezeCurve {
    fn from(c: FreezeCurve) -> Self {
        PyFreezeCurve {
            betas: c.betas,
            minus_f: c.minus_f,
            stderr: c.stderr,
            n_param: c.n_param,
            samples: c.samples,
        }
    }
}

#[pymethods]
impl PyFreezeCurve {
    #[staticmethod]
    fn predicted(beta: f64) -> f64 {
        FreezeCurve::predicted(beta)
    }

    fn __repr__(&self) -> String {
        format!("FreezeCurve(n_param={}, samples={}, betas={:?})", self.n_param, self.samples, self.betas)
    }
}

#[pyfunction]
#[pyo3(signature = (model, n, betas, samples, seed, grid_factor = 16, tag = "freeze"))]
#[allow(clippy::too_many_arguments)]
fn freeze_scan(
    py: Python<'_>,
    model: &str,
    n: usize,
    betas: Vec<f64>,
    samples: usize,
    seed: u64,
    grid_factor: usize,
    tag: &str,
) -> PyResult<PyFreezeCurve> {
    let source = self::model(model)?;
    let curve = py
        .detach(|| thermo::freeze_scan(source, n, &betas, samples, grid_factor, seed, tag))
        .map_err(py_err)?;
    Ok(curve.into())
}

#[pyfunction]
fn moment_predicted(n: usize, beta: f64, k: u32) -> PyResult<f64> {
    thermo::moment_predicted(n, beta, k).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (n, beta, thetas = vec![0.0]))]
fn toeplitz_moment(n: usize, beta: f64, thetas: Vec<f64>) -> PyResult<f64> {
    thermo::toeplitz_moment(n, beta, &thetas).map_err(py_err)
}

#[pyfunction]
fn fisher_hartwig_ratio(n: usize, beta: f64) -> PyResult<f64> {
    thermo::fisher_hartwig_ratio(n, beta).map_err(py_err)
}

#[pyfunction]
fn target_pdf(x: f64) -> f64 {
    extremes::target_pdf(x)
}

#[pyfunction]
fn target_cdf(x: f64) -> f64 {
    extremes::target_cdf(x)
}

#[pyfunction]
fn target_quantile(q: f64) -> PyResult<f64> {
    extremes::target_quantile(q).map_err(py_err)
}

#[pyfunction]
fn ks_statistic(xs: Vec<f64>) -> PyResult<f64> {
    extremes::ks_statistic(&xs).map_err(py_err)
}

/// Extreme statistics `y = -2 max log |p|` of `samples` landscapes.
#[pyfunction]
#[pyo3(signature = (model, n, samples, seed, grid_factor = 16, tag = "extremes"))]
fn extreme_samples(
    py: Python<'_>,
    model: &str,
    n: usize,
    samples: usize,
    seed: u64,
    grid_factor: usize,
    tag: &str,
) -> PyResult<Vec<f64>> {
    let source = self::model(model)?;
    let out = py
        .detach(|| extremes::extreme_samples(source, n, samples, grid_factor, seed, tag))
        .map_err(py_err)?;
    Ok(out.iter().map(|s| s.y).collect())
}

/// Recentred (`c`) and variance-normalized extreme statistics.
#[pyfunction]
#[pyo3(signature = (ys, n, c = 1.5))]
fn recenter_and_normalize(ys: Vec<f64>, n: usize, c: f64) -> PyResult<Vec<f64>> {
    let samples: Vec<_> = ys
        .iter()
        .map(|&y| extremes::ExtremeSample {
            y,
            n_param: n,
            model: FieldSource::Cue,
        })
        .collect();
    let params = extremes::RecenteringParams::new(n, c).map_err(py_err)?;
    let xs = extremes::recenter(&samples, &params).map_err(py_err)?;
    extremes::normalize_to_target_variance(&xs).map_err(py_err)
}

#[pyfunction]
fn siegel_z(t: f64) -> PyResult<f64> {
    zetaline::siegel_z(t).map_err(py_err)
}

#[pyfunction]
fn rs_theta(t: f64) -> PyResult<f64> {
    zetaline::rs_theta(t).map_err(py_err)
}

#[pyfunction]
fn zeta_abs(t: f64) -> PyResult<f64> {
    Ok(zetaline::zeta_abs_halfline(t).map_err(py_err)?.zeta_abs)
}

/// Maximum of `|zeta(1/2 + it)|` over one `2 pi` interval.
#[pyclass(name = "ZetaInterval", module = "freezelab", get_all)]
struct PyZetaInterval {
    t_start: f64,
    max_abs: f64,
    argmax_t: f64,
    n_assoc: usize,
}

impl From<ZetaInterval> for PyZetaInterval {
    fn from(i: ZetaInterval) -> Self {
        PyZetaInterval {
            t_start: i.t_start,
            max_abs: i.max_abs,
            argmax_t: i.argmax_t,
            n_assoc: i.n_assoc,
        }
    }
}

#[pymethods]
impl PyZetaInterval {
    fn __repr__(&self) -> String {
        format!(
            "ZetaInterval(t_start={}, max_abs={}, argmax_t={})",
            self.t_start, self.max_abs, self.argmax_t
        )
    }
}

#[pyfunction]
fn interval_max(t_start: f64) -> PyResult<PyZetaInterval> {
    Ok(zetaline::interval_max(t_start).map_err(py_err)?.into())
}

/// `(data_mean, ratio_c32, ratio_c12)` over consecutive intervals.
#[pyfunction]
fn table1_experiment(py: Python<'_>, t_center: f64, intervals: usize) -> PyResult<(f64, f64, f64)> {
    let row = py
        .detach(|| zetaline::table1_experiment(t_center, intervals))
        .map_err(py_err)?;
    Ok((row.data_mean, row.ratio_c32, row.ratio_c12))
}

/// The `freezelab` extension module.
#[pymodule]
pub fn freezelab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEigenphaseSet>()?;
    m.add_class::<PyFourierField>()?;
    m.add_class::<PyFreezeCurve>()?;
    m.add_class::<PyZetaInterval>()?;
    m.add_function(wrap_pyfunction!(ln_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_fn, m)?)?;
    m.add_function(wrap_pyfunction!(ln_barnes_g, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_k, m)?)?;
    m.add_function(wrap_pyfunction!(sample_cue, m)?)?;
    m.add_function(wrap_pyfunction!(sample_fourier_field, m)?)?;
    m.add_function(wrap_pyfunction!(freeze_scan, m)?)?;
    m.add_function(wrap_pyfunction!(moment_predicted, m)?)?;
    m.add_function(wrap_pyfunction!(toeplitz_moment, m)?)?;
    m.add_function(wrap_pyfunction!(fisher_hartwig_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(target_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(target_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(target_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(ks_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(extreme_samples, m)?)?;
    m.add_function(wrap_pyfunction!(recenter_and_normalize, m)?)?;
    m.add_function(wrap_pyfunction!(siegel_z, m)?)?;
    m.add_function(wrap_pyfunction!(rs_theta, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_abs, m)?)?;
    m.add_function(wrap_pyfunction!(interval_max, m)?)?;
    m.add_function(wrap_pyfunction!(table1_experiment, m)?)?;
    m.add("RNG_ALGORITHM", freezelab_core::rng::ALGORITHM_ID)?;
    Ok(())
}
