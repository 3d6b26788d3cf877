use std::sync::Arc;

use divlat::connectivity::{self, Budget};
use divlat::criteria;
use divlat::dualgraph::{self, CurveConfigInput};
use divlat::io;
use divlat::lattice::{Divisor, IntersectionLattice, SingClass};
use divlat::parse::parse_divisor;
use divlat::rational::{self, Rational};
use divlat::zariski;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use pyo3::IntoPyObjectExt;
use serde_json::Value;

create_exception!(pydivlat, DivlatError, PyException);
create_exception!(pydivlat, BudgetError, DivlatError);

fn err(e: divlat::Error) -> PyErr {
    let msg = format!("[{}] {e}", e.code());
    match e {
        divlat::Error::Budget { .. } => BudgetError::new_err(msg),
        _ => DivlatError::new_err(msg),
    }
}

fn rat(text: &str) -> PyResult<Rational> {
    rational::parse(text).map_err(DivlatError::new_err)
}

fn fmt(r: &Rational) -> String {
    rational::format(r)
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    match v {
        Value::Null => Ok(py.None()),
        Value::Bool(b) => b.into_py_any(py),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_py_any(py),
            None => n.as_f64().into_py_any(py),
        },
        Value::String(s) => s.into_py_any(py),
        Value::Array(a) => {
            let items = a
                .iter()
                .map(|x| to_py(py, x))
                .collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_py_any(py)
        }
        Value::Object(o) => {
            let d = PyDict::new(py);
            for (k, x) in o {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_py_any(py)
        }
    }
}

/// A finite set of primes with a symmetric rational intersection matrix.
#[pyclass(name = "Lattice", frozen)]
struct PyLattice(Arc<IntersectionLattice>);

#[pymethods]
impl PyLattice {
    /// Entries are strings such as "-2/3" or integers.
    #[new]
    fn new(name: &str, primes: Vec<String>, matrix: Vec<Vec<String>>) -> PyResult<Self> {
        let m = matrix
            .iter()
            .map(|row| row.iter().map(|x| rat(x)).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PyLattice(
            IntersectionLattice::new(name, primes, m).map_err(err)?,
        ))
    }

    /// Loads a lattice document from a path or `corpus:NAME`.
    #[staticmethod]
    fn load(reference: &str) -> PyResult<Self> {
        Ok(PyLattice(io::load_lattice(reference, None).map_err(err)?))
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    #[getter]
    fn primes(&self) -> Vec<String> {
        self.0.primes().to_vec()
    }

    fn matrix(&self) -> Vec<Vec<String>> {
        self.0
            .matrix()
            .iter()
            .map(|r| r.iter().map(fmt).collect())
            .collect()
    }

    fn divisor(&self, text: &str) -> PyResult<PyDivisor> {
        Ok(PyDivisor(parse_divisor(text, &self.0).map_err(err)?))
    }

    fn to_json(&self) -> String {
        io::lattice_to_json(&self.0).to_string()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Lattice({:?}, primes={:?})", self.0.name(), self.0.primes())
    }
}

#[pyclass(name = "Divisor", frozen)]
struct PyDivisor(Divisor);

type Witness = (PyDivisor, PyDivisor, String);

#[pymethods]
impl PyDivisor {
    fn coeffs(&self) -> Vec<String> {
        self.0.coeffs().iter().map(fmt).collect()
    }

    fn intersect(&self, other: &PyDivisor) -> PyResult<String> {
        Ok(fmt(&self.0.intersect(&other.0).map_err(err)?))
    }

    fn self_intersection(&self) -> String {
        fmt(&self.0.self_intersection())
    }

    fn is_effective(&self) -> bool {
        self.0.is_effective()
    }

    fn is_nef(&self) -> bool {
        self.0.is_nef()
    }

    fn roundup(&self) -> PyDivisor {
        PyDivisor(self.0.roundup())
    }

    /// `(P, N)` with `D = P + N`.
    fn zariski(&self) -> PyResult<(PyDivisor, PyDivisor)> {
        let zp = zariski::zariski_decompose(&self.0).map_err(err)?;
        Ok((PyDivisor(zp.positive), PyDivisor(zp.negative)))
    }

    fn is_chain_connected(&self) -> PyResult<bool> {
        Ok(connectivity::is_chain_connected(&self.0)
            .map_err(err)?
            .connected)
    }

    fn chain_connected_component(&self) -> PyResult<PyDivisor> {
        Ok(PyDivisor(
            connectivity::chain_connected_component(&self.0).map_err(err)?,
        ))
    }

    fn is_z_positive(&self) -> PyResult<bool> {
        Ok(connectivity::is_z_positive(&self.0).map_err(err)?.positive)
    }

    /// Returns `(holds, witness)`; the witness is `(A, B, A.B)` for the
    /// minimizing decomposition, or None when there is none.
    #[pyo3(signature = (m = "0", strict = true, budget = None))]
    fn is_m_connected(
        &self,
        m: &str,
        strict: bool,
        budget: Option<u64>,
    ) -> PyResult<(bool, Option<Witness>)> {
        let b = budget.map(Budget).unwrap_or_default();
        let r = connectivity::is_m_connected(&self.0, &rat(m)?, strict, b).map_err(err)?;
        let w = r
            .minimizer
            .map(|w| (PyDivisor(w.a), PyDivisor(w.b), fmt(&w.product)));
        Ok((r.holds, w))
    }

    fn __add__(&self, other: &PyDivisor) -> PyResult<PyDivisor> {
        Ok(PyDivisor(self.0.try_add(&other.0).map_err(err)?))
    }

    fn __sub__(&self, other: &PyDivisor) -> PyResult<PyDivisor> {
        Ok(PyDivisor(self.0.try_sub(&other.0).map_err(err)?))
    }

    fn __eq__(&self, other: &PyDivisor) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// A contraction of exceptional primes between two lattices.
#[pyclass(name = "Resolution", frozen)]
struct PyResolution(io::LoadedResolution);

#[pymethods]
impl PyResolution {
    #[staticmethod]
    fn load(reference: &str) -> PyResult<Self> {
        Ok(PyResolution(
            io::load_resolution(reference, None).map_err(err)?,
        ))
    }

    #[getter]
    fn upstairs(&self) -> PyLattice {
        PyLattice(self.0.model.upstairs().clone())
    }

    #[getter]
    fn downstairs(&self) -> PyLattice {
        PyLattice(self.0.model.downstairs().clone())
    }

    #[getter]
    fn singularity_class(&self) -> Option<String> {
        self.0.class.map(|c| c.to_string())
    }

    fn pullback(&self, d: &PyDivisor) -> PyResult<PyDivisor> {
        Ok(PyDivisor(self.0.model.mumford_pullback(&d.0).map_err(err)?))
    }

    fn pushforward(&self, d: &PyDivisor) -> PyResult<PyDivisor> {
        Ok(PyDivisor(self.0.model.pushforward(&d.0).map_err(err)?))
    }

    fn anticanonical_cycle(&self) -> PyResult<PyDivisor> {
        Ok(PyDivisor(self.0.model.anticanonical_cycle().map_err(err)?))
    }

    fn fundamental_cycle(&self) -> PyResult<PyDivisor> {
        Ok(PyDivisor(self.0.model.fundamental_cycle().map_err(err)?))
    }

    /// The delta report for the default cycle of the given (or recorded)
    /// singularity class.
    #[pyo3(signature = (singularity_class = None))]
    fn delta(&self, py: Python<'_>, singularity_class: Option<&str>) -> PyResult<Py<PyAny>> {
        let class: SingClass = match singularity_class {
            Some(s) => s.parse().map_err(err)?,
            None => self
                .0
                .class
                .ok_or_else(|| DivlatError::new_err("resolution has no singularity class"))?,
        };
        let z = self.0.model.default_z(class).map_err(err)?;
        let rep = self.0.model.delta_invariant(&z, None, None).map_err(err)?;
        to_py(py, &serde_json::to_value(&rep).expect("serializable"))
    }
}

#[pyfunction]
fn mu(x: &str, d: &str) -> PyResult<String> {
    Ok(fmt(&criteria::mu(&rat(x)?, &rat(d)?).map_err(err)?))
}

/// First Betti number of the extended dual graph of a curve configuration
/// given as a JSON document.
#[pyfunction]
fn betti1(config_json: &str) -> PyResult<u64> {
    let cfg: CurveConfigInput = serde_json::from_str(config_json)
        .map_err(|e| DivlatError::new_err(format!("curve configuration: {e}")))?;
    Ok(dualgraph::betti1(
        &dualgraph::build_graph(&cfg).map_err(err)?,
    ))
}

/// `(dim_s, dim_n)` for a matrix over F_p.
#[pyfunction]
fn frobenius_split(matrix: Vec<Vec<u64>>, p: u64) -> PyResult<(usize, usize)> {
    let s = criteria::frobenius_split(&matrix, p).map_err(err)?;
    Ok((s.dim_s, s.dim_n))
}

/// Runs the command line tool in-process; returns `(code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let o = divlat::cli::run(std::iter::once("divlat".to_string()).chain(args));
    (o.code, o.stdout, o.stderr)
}

#[pymodule]
fn pydivlat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyDivisor>()?;
    m.add_class::<PyResolution>()?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(betti1, m)?)?;
    m.add_function(wrap_pyfunction!(frobenius_split, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("DivlatError", m.py().get_type::<DivlatError>())?;
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    Ok(())
}
