//! Python bindings for the multilayer diffusion solver.
//!
//! Exposes problem construction (from TOML configs or built-in presets),
//! the semi-analytical solver, the finite-difference reference, and the
//! classical series solution. Fields come back as plain nested lists, one
//! x-vector and one value-vector per layer per time.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use lamina::assembly::{Grid, Solver, SolverSettings};
use lamina::classical::ClassicalSolution;
use lamina::config::Config;
use lamina::model::ValidatedProblem;
use lamina::presets::{preset, PostColumn, PRESET_NAMES};

fn to_py_err(e: lamina::Error) -> PyErr {
    match e {
        lamina::Error::Invalid(_)
        | lamina::Error::Config(_)
        | lamina::Error::Domain(_)
        | lamina::Error::Unsupported(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// An evaluated space–time field.
#[pyclass]
#[derive(Clone)]
struct Solution {
    #[pyo3(get)]
    times: Vec<f64>,
    /// Per-layer x grids.
    #[pyo3(get)]
    xs: Vec<Vec<f64>>,
    /// values[time][layer][point]
    #[pyo3(get)]
    values: Vec<Vec<Vec<f64>>>,
    /// Recovered interface functions g_i(t), one row per time (i = 0..=m).
    #[pyo3(get)]
    interface_g: Vec<Vec<f64>>,
}

impl From<lamina::assembly::SolutionField> for Solution {
    fn from(f: lamina::assembly::SolutionField) -> Self {
        Solution {
            times: f.times,
            xs: f.xs,
            values: f.values,
            interface_g: f.interface_g,
        }
    }
}

#[pymethods]
impl Solution {
    /// Max-abs relative difference against a reference solution, per time.
    fn relative_error(&self, reference: &Solution) -> PyResult<Vec<f64>> {
        let to_field = |s: &Solution| lamina::assembly::SolutionField {
            times: s.times.clone(),
            xs: s.xs.clone(),
            values: s.values.clone(),
            interface_g: s.interface_g.clone(),
            n_modes: 0,
            inversion_order: 0,
        };
        lamina::assembly::SolutionField::relative_error(&to_field(reference), &to_field(self))
            .map_err(to_py_err)
    }
}

/// A validated multilayer diffusion problem.
#[pyclass]
struct Problem {
    validated: ValidatedProblem,
    settings: SolverSettings,
    times_hint: Vec<f64>,
    post: PostColumn,
}

#[pymethods]
impl Problem {
    /// Parse a TOML config string.
    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        let cfg = Config::from_toml(text).map_err(to_py_err)?;
        let (spec, settings) = cfg.to_problem().map_err(to_py_err)?;
        Ok(Problem {
            validated: spec.validate().map_err(to_py_err)?,
            settings,
            times_hint: Vec::new(),
            post: PostColumn::None,
        })
    }

    /// Load a built-in preset by name.
    #[staticmethod]
    fn from_preset(name: &str) -> PyResult<Self> {
        let p = preset(name).map_err(to_py_err)?;
        Ok(Problem {
            validated: p.spec.validate().map_err(to_py_err)?,
            settings: SolverSettings::default(),
            times_hint: p.times,
            post: p.post,
        })
    }

    #[getter]
    fn layer_count(&self) -> usize {
        self.validated.layer_count()
    }

    #[getter]
    fn breakpoints(&self) -> Vec<f64> {
        self.validated.breakpoints().to_vec()
    }

    /// Display times suggested by the preset (empty for configs).
    #[getter]
    fn suggested_times(&self) -> Vec<f64> {
        self.times_hint.clone()
    }

    /// Exponent of the post-evaluation rescale (`c = e^{rate t} u`); 0 when
    /// the preset has none.
    #[getter]
    fn rescale_rate(&self) -> f64 {
        match self.post {
            PostColumn::ExpTime { .. } => 1.0,
            _ => 0.0,
        }
    }

    /// Dump the problem back out as a TOML config string.
    fn to_toml(&self) -> PyResult<String> {
        Config::from_validated(&self.validated, self.settings)
            .and_then(|c| c.to_toml())
            .map_err(to_py_err)
    }

    /// Semi-analytical solution on a uniform grid.
    #[pyo3(signature = (times, points_per_layer=101, n=None, np=None))]
    fn solve(
        &self,
        times: Vec<f64>,
        points_per_layer: usize,
        n: Option<usize>,
        np: Option<usize>,
    ) -> PyResult<Solution> {
        let settings = SolverSettings {
            n_modes: n.unwrap_or(self.settings.n_modes),
            inversion_order: np.unwrap_or(self.settings.inversion_order),
        };
        let solver = Solver::new(self.validated.clone(), settings).map_err(to_py_err)?;
        let grid = Grid::uniform(&self.validated, points_per_layer, &times);
        Ok(solver.evaluate(&grid).map_err(to_py_err)?.into())
    }

    /// Crank–Nicolson reference solution.
    #[pyo3(signature = (times, divisions_per_layer=200, dt=None))]
    fn solve_fdm(
        &self,
        times: Vec<f64>,
        divisions_per_layer: usize,
        dt: Option<f64>,
    ) -> PyResult<Solution> {
        let t_min = times
            .iter()
            .copied()
            .filter(|&t| t > 0.0)
            .fold(f64::INFINITY, f64::min);
        let dt = dt.unwrap_or(t_min / 200.0);
        let divisions = lamina::fdm::uniform_divisions(&self.validated, divisions_per_layer);
        Ok(lamina::fdm::solve_fdm(&self.validated, &divisions, dt, &times)
            .map_err(to_py_err)?
            .into())
    }

    /// Classical series solution (time-independent boundary data, m <= 6).
    #[pyo3(signature = (times, points_per_layer=101, terms=60))]
    fn solve_classical(
        &self,
        times: Vec<f64>,
        points_per_layer: usize,
        terms: usize,
    ) -> PyResult<Solution> {
        let classical =
            ClassicalSolution::new(self.validated.clone(), terms).map_err(to_py_err)?;
        let grid = Grid::uniform(&self.validated, points_per_layer, &times);
        Ok(classical.evaluate(&grid).map_err(to_py_err)?.into())
    }
}

/// Names of the built-in presets.
#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    PRESET_NAMES.to_vec()
}

/// Laplace transform of a Gaussian pulse at complex `s` (returned as a
/// `(re, im)` pair).
#[pyfunction]
fn gaussian_transform(
    s_re: f64,
    s_im: f64,
    cmax: f64,
    mu: f64,
    sigma: f64,
) -> PyResult<(f64, f64)> {
    let v = lamina::laplace::gaussian_transform(
        num_complex::Complex64::new(s_re, s_im),
        cmax,
        mu,
        sigma,
    )
    .map_err(to_py_err)?;
    Ok((v.re, v.im))
}

/// Complex error function (returned as a `(re, im)` pair).
#[pyfunction]
fn erf(z_re: f64, z_im: f64) -> PyResult<(f64, f64)> {
    let v = lamina::erf::erf(num_complex::Complex64::new(z_re, z_im)).map_err(to_py_err)?;
    Ok((v.re, v.im))
}

#[pymodule]
fn lamina_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_transform, m)?)?;
    m.add_function(wrap_pyfunction!(erf, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
