//! Python bindings. Exact targets come back as `fractions.Fraction`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ysys::cluster;
use ysys::identities::{self, VerificationReport};
use ysys::qsolve;
use ysys::rootsys;
use ysys::ydynamics;
use ysys::{seeded_rng, Error, ExactRational, GramVariant, TypeLabel};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } | Error::Unsupported(_) | Error::SignIncoherent(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_label(s: &str) -> PyResult<TypeLabel> {
    s.parse().map_err(py_err)
}

fn parse_variant(s: &str) -> PyResult<GramVariant> {
    s.parse().map_err(py_err)
}

fn fraction<'py>(py: Python<'py>, r: &ExactRational) -> PyResult<Bound<'py, PyAny>> {
    PyModule::import(py, "fractions")?
        .getattr("Fraction")?
        .call1((r.to_string(),))
}

fn report_dict<'py>(py: Python<'py>, r: &VerificationReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("instance", &r.instance)?;
    d.set_item("kind", r.kind.to_string())?;
    d.set_item("computed", r.computed)?;
    d.set_item("expected", fraction(py, &r.expected)?)?;
    d.set_item("deviation", r.deviation)?;
    d.set_item("tolerance", r.tolerance)?;
    d.set_item("passed", r.passed)?;
    d.set_item("detail", &r.detail)?;
    Ok(d)
}

/// Rogers dilogarithm `L(x)` on `[0, 1]`.
#[pyfunction]
fn rogers_dilog(x: f64) -> PyResult<f64> {
    ysys::dilog::rogers_dilog(x).map_err(py_err)
}

/// Quadrature value of `L(x)`, independent of the series.
#[pyfunction]
fn dilog_oracle(x: f64) -> PyResult<f64> {
    ysys::dilog::dilog_oracle(x).map_err(py_err)
}

#[pyclass(name = "RootSystem", frozen)]
struct PyRootSystem {
    inner: rootsys::RootSystem,
}

#[pymethods]
impl PyRootSystem {
    #[new]
    fn new(label: &str) -> PyResult<Self> {
        Ok(PyRootSystem {
            inner: rootsys::RootSystem::new(parse_label(label)?),
        })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.to_string()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn cartan(&self) -> Vec<Vec<i64>> {
        self.inner.cartan.clone()
    }

    #[getter]
    fn nu(&self) -> Vec<u32> {
        self.inner.nu.clone()
    }

    #[getter]
    fn coxeter(&self) -> Option<u32> {
        self.inner.coxeter
    }

    /// Entries of `A` or `A♭` as fractions.
    #[pyo3(signature = (variant = "A"))]
    fn weight_gram<'py>(
        &self,
        py: Python<'py>,
        variant: &str,
    ) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        let g = rootsys::weight_gram(&self.inner, parse_variant(variant)?);
        g.iter()
            .map(|row| row.iter().map(|x| fraction(py, x)).collect())
            .collect()
    }

    /// Langlands dual as a string such as `E6^(2)`.
    fn langlands_dual(&self) -> String {
        rootsys::langlands_dual(self.inner.label).to_string()
    }

    fn __repr__(&self) -> String {
        format!("RootSystem('{}')", self.inner.label)
    }
}

#[pyfunction]
#[pyo3(signature = (label, variant = "A"))]
fn solve_q_system<'py>(
    py: Python<'py>,
    label: &str,
    variant: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let rs = rootsys::RootSystem::new(parse_label(label)?);
    let sol = qsolve::solve_q_system(&rs, parse_variant(variant)?).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("q", sol.q)?;
    d.set_item("residual", sol.residual)?;
    d.set_item("iterations", sol.iterations)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (label, variant = "A"))]
fn solve_y_form<'py>(py: Python<'py>, label: &str, variant: &str) -> PyResult<Bound<'py, PyDict>> {
    let rs = rootsys::RootSystem::new(parse_label(label)?);
    let sol = qsolve::solve_y_form(&rs, parse_variant(variant)?).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("y", sol.y)?;
    d.set_item("residual", sol.residual)?;
    d.set_item("iterations", sol.iterations)?;
    Ok(d)
}

/// Level-ℓ constant Y-system; `y[i][m-1]` for simply-laced types.
#[pyfunction]
fn solve_constant_y<'py>(
    py: Python<'py>,
    label: &str,
    level: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let rs = rootsys::RootSystem::new(parse_label(label)?);
    let grid = qsolve::solve_constant_y(&rs, level).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("y", grid.y)?;
    d.set_item("level", grid.level)?;
    d.set_item("residual", grid.residual)?;
    d.set_item("iterations", grid.iterations)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (label, variant = "A"))]
fn expected_constant<'py>(
    py: Python<'py>,
    label: &str,
    variant: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let c = identities::expected_constant(parse_label(label)?, parse_variant(variant)?);
    fraction(py, &c)
}

#[pyfunction]
#[pyo3(signature = (label, variant = "A", tol = 1e-9))]
fn verify_cf_identity<'py>(
    py: Python<'py>,
    label: &str,
    variant: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = identities::verify_cf_identity(parse_label(label)?, parse_variant(variant)?, tol)
        .map_err(py_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (label, level, tol = 1e-8))]
fn verify_level_identity<'py>(
    py: Python<'py>,
    label: &str,
    level: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = identities::verify_level_identity(parse_label(label)?, level, tol).map_err(py_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (label, tol = 1e-10))]
fn verify_folding<'py>(py: Python<'py>, label: &str, tol: f64) -> PyResult<Bound<'py, PyDict>> {
    let r = identities::verify_folding(parse_label(label)?, tol).map_err(py_err)?;
    report_dict(py, &r)
}

#[pyfunction]
#[pyo3(signature = (label, tol = 1e-10))]
fn verify_flat_specialization<'py>(
    py: Python<'py>,
    label: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = identities::verify_flat_specialization(parse_label(label)?, tol).map_err(py_err)?;
    report_dict(py, &r)
}

/// Evolves from two slices; returns `slices[u][i][m-1]`.
#[pyfunction]
fn evolve(
    label: &str,
    level: usize,
    slice0: Vec<Vec<f64>>,
    slice1: Vec<Vec<f64>>,
    steps: usize,
) -> PyResult<Vec<Vec<Vec<f64>>>> {
    let rs = rootsys::RootSystem::new(parse_label(label)?);
    let traj = ydynamics::evolve(&rs, level, slice0, slice1, steps).map_err(py_err)?;
    Ok(traj.slices)
}

/// Evolves from seeded random slices over one period and checks both identities.
#[pyfunction]
#[pyo3(signature = (label, level, seed = 0))]
fn check_dynamics<'py>(
    py: Python<'py>,
    label: &str,
    level: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let rs = rootsys::RootSystem::new(parse_label(label)?);
    let p = ydynamics::period(&rs, level).map_err(py_err)?;
    let mut rng = seeded_rng(seed);
    let s0 = ydynamics::random_slice(&rs, level, &mut rng);
    let s1 = ydynamics::random_slice(&rs, level, &mut rng);
    let traj = ydynamics::evolve(&rs, level, s0, s1, p + 2).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("period", p)?;
    d.set_item(
        "periodicity_deviation",
        ydynamics::check_periodicity(&traj).map_err(py_err)?,
    )?;
    d.set_item("sum", ydynamics::periodic_dilog_sum(&traj).map_err(py_err)?)?;
    d.set_item(
        "target",
        ydynamics::periodic_sum_target(&rs, level).map_err(py_err)?,
    )?;
    Ok(d)
}

/// Runs a mutation sequence (0-based nodes) and reports the cycle.
#[pyfunction]
fn run_mutation_cycle<'py>(
    py: Python<'py>,
    b: Vec<Vec<i64>>,
    sequence: Vec<usize>,
    y0: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = cluster::run_mutation_cycle(&b, &sequence, &y0).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("is_periodic", r.is_periodic)?;
    d.set_item("period", r.period)?;
    d.set_item("permutation", r.permutation)?;
    d.set_item("n_minus", r.n_minus)?;
    d.set_item("normalized_sum", r.normalized_sum)?;
    d.set_item(
        "signs",
        r.steps
            .iter()
            .map(|s| s.sign.to_string())
            .collect::<Vec<_>>(),
    )?;
    d.set_item("y_values", r.steps.iter().map(|s| s.y).collect::<Vec<_>>())?;
    Ok(d)
}

/// Exchange matrix and default sequence (0-based) of a named preset.
#[pyfunction]
fn cluster_preset(name: &str) -> PyResult<(Vec<Vec<i64>>, Vec<usize>)> {
    let p = cluster::preset(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset {name:?}")))?;
    Ok((p.b, p.sequence))
}

#[pymodule]
#[pyo3(name = "ysys")]
fn ysys_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRootSystem>()?;
    m.add_function(wrap_pyfunction!(rogers_dilog, m)?)?;
    m.add_function(wrap_pyfunction!(dilog_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(solve_q_system, m)?)?;
    m.add_function(wrap_pyfunction!(solve_y_form, m)?)?;
    m.add_function(wrap_pyfunction!(solve_constant_y, m)?)?;
    m.add_function(wrap_pyfunction!(expected_constant, m)?)?;
    m.add_function(wrap_pyfunction!(verify_cf_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_level_identity, m)?)?;
    m.add_function(wrap_pyfunction!(verify_folding, m)?)?;
    m.add_function(wrap_pyfunction!(verify_flat_specialization, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(check_dynamics, m)?)?;
    m.add_function(wrap_pyfunction!(run_mutation_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(cluster_preset, m)?)?;
    Ok(())
}
