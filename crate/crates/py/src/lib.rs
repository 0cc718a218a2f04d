//! Python bindings for `luequiv`.
//!
//! Matrices cross the boundary as lists of rows of Python `complex`; party
//! indices are zero-based as in the Rust API.

use luequiv::equivalence as eq;
use luequiv::invariants::{self as inv, InvariantFingerprint};
use luequiv::linalg::{self, ComplexMatrix};
use luequiv::states::{self, Bipartition};
use luequiv::{io, Complex64, Error};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(luequiv, NumericalError, PyRuntimeError, "A solver tolerance could not be met.");

type Rows = Vec<Vec<Complex64>>;

fn to_py(err: Error) -> PyErr {
    if err.is_numerical() {
        NumericalError::new_err(err.to_string())
    } else {
        PyValueError::new_err(err.to_string())
    }
}

fn matrix_from_rows(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(to_py)
}

fn matrix_to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

fn square(values: &[f64], n: usize) -> Vec<Vec<f64>> {
    values.chunks(n.max(1)).map(<[f64]>::to_vec).collect()
}

/// Pure state on a tensor product of qudits, party 0 slowest.
#[pyclass(name = "PureState", module = "luequiv", frozen)]
pub struct PyPureState {
    inner: states::PureState,
}

#[pymethods]
impl PyPureState {
    #[new]
    #[pyo3(signature = (dims, amplitudes, normalize = false))]
    fn new(dims: Vec<usize>, amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let inner = if normalize {
            states::PureState::normalized(dims, amplitudes)
        } else {
            states::PureState::new(dims, amplitudes)
        };
        Ok(Self { inner: inner.map_err(to_py)? })
    }

    #[staticmethod]
    fn random(dims: Vec<usize>, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: states::PureState::random(dims, seed).map_err(to_py)? })
    }

    #[staticmethod]
    fn ghz(n: usize) -> Self {
        Self { inner: states::PureState::ghz(n) }
    }

    #[staticmethod]
    fn w() -> Self {
        Self { inner: states::PureState::w() }
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = io::state_from_str(text).and_then(|d| d.into_pure()).map_err(to_py)?;
        Ok(Self { inner })
    }

    fn to_json(&self) -> PyResult<String> {
        io::pure_state_to_string(&self.inner).map_err(to_py)
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().as_slice().to_vec()
    }

    fn inner(&self, other: &PyPureState) -> PyResult<Complex64> {
        self.inner.inner(&other.inner).map_err(to_py)
    }

    /// Reduced density matrix after tracing out `traced`.
    fn partial_trace(&self, traced: Vec<usize>) -> PyResult<Rows> {
        let rho = self.inner.partial_trace(&traced).map_err(to_py)?;
        Ok(matrix_to_rows(rho.matrix()))
    }

    /// Split label such as "12-3" (one-based parties).
    fn schmidt_coefficients(&self, split: &str) -> PyResult<Vec<f64>> {
        let split = Bipartition::parse(split, self.inner.num_parties()).map_err(to_py)?;
        self.inner.schmidt_coefficients(&split).map_err(to_py)
    }

    fn apply_local_unitaries(&self, unitaries: Vec<Rows>) -> PyResult<Self> {
        let us = unitaries.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
        Ok(Self { inner: self.inner.apply_local_unitaries(&us).map_err(to_py)? })
    }

    fn apply_on_party(&self, party: usize, u: Rows) -> PyResult<Self> {
        let u = matrix_from_rows(u)?;
        Ok(Self { inner: self.inner.apply_on_party(party, &u).map_err(to_py)? })
    }

    fn __repr__(&self) -> String {
        format!("PureState(dims={:?})", self.inner.dims())
    }
}

#[pyclass(name = "Fingerprint", module = "luequiv", frozen)]
pub struct PyFingerprint {
    inner: InvariantFingerprint,
}

#[pymethods]
impl PyFingerprint {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: io::fingerprint_from_str(text).map_err(to_py)? })
    }

    fn to_json(&self) -> PyResult<String> {
        io::fingerprint_to_string(&self.inner).map_err(to_py)
    }

    #[getter]
    fn split(&self) -> String {
        self.inner.split.clone()
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims.clone()
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn spectrum(&self) -> Vec<f64> {
        self.inner.spectrum.clone()
    }

    /// Moments `J[s-1] = Tr σ^s`.
    #[getter]
    fn j(&self) -> Vec<f64> {
        self.inner.j.clone()
    }

    #[getter]
    fn omega(&self) -> Vec<Vec<f64>> {
        square(&self.inner.metrics.omega, self.inner.metrics.padded_size)
    }

    #[getter]
    fn theta(&self) -> Vec<Vec<f64>> {
        square(&self.inner.metrics.theta, self.inner.metrics.padded_size)
    }

    fn x(&self, i: usize, j: usize, k: usize) -> PyResult<Complex64> {
        self.check_index([i, j, k])?;
        Ok(self.inner.cubic.x_at(i, j, k))
    }

    fn y(&self, i: usize, j: usize, k: usize) -> PyResult<Complex64> {
        self.check_index([i, j, k])?;
        Ok(self.inner.cubic.y_at(i, j, k))
    }

    #[getter]
    fn generic(&self) -> bool {
        self.inner.generic
    }

    #[getter]
    fn canonical(&self) -> bool {
        self.inner.canonical
    }

    #[getter]
    fn gap(&self) -> f64 {
        self.inner.gap
    }

    fn __repr__(&self) -> String {
        format!(
            "Fingerprint(split={:?}, rank={}, generic={}, canonical={})",
            self.inner.split,
            self.inner.rank(),
            self.inner.generic,
            self.inner.canonical
        )
    }
}

impl PyFingerprint {
    fn check_index(&self, idx: [usize; 3]) -> PyResult<()> {
        let n = self.inner.cubic.n;
        if idx.iter().any(|&i| i >= n) {
            return Err(PyValueError::new_err(format!("index {idx:?} out of range for rank {n}")));
        }
        Ok(())
    }
}

#[pyclass(name = "LUWitness", module = "luequiv", frozen, get_all)]
pub struct PyLUWitness {
    unitaries: Vec<Rows>,
    fidelity: f64,
    phase: Complex64,
}

impl From<eq::LUWitness> for PyLUWitness {
    fn from(w: eq::LUWitness) -> Self {
        Self {
            unitaries: w.unitaries.iter().map(matrix_to_rows).collect(),
            fidelity: w.fidelity,
            phase: w.phase,
        }
    }
}

#[pymethods]
impl PyLUWitness {
    fn __repr__(&self) -> String {
        format!("LUWitness(fidelity={:.15}, parties={})", self.fidelity, self.unitaries.len())
    }
}

#[pyclass(name = "CounterexampleReport", module = "luequiv", frozen, get_all)]
pub struct PyCounterexampleReport {
    reduced_residuals: Vec<f64>,
    spectrum_1: Vec<f64>,
    spectrum_2: Vec<f64>,
    rank_1: usize,
    rank_2: usize,
    max_spectral_gap: f64,
    verdict: String,
}

#[pyfunction]
fn haar_unitary(d: usize, seed: u64) -> PyResult<Rows> {
    if d == 0 {
        return Err(PyValueError::new_err("dimension must be positive"));
    }
    Ok(matrix_to_rows(&linalg::haar_unitary(d, seed)))
}

/// Eigenvalues (descending) and eigenvectors (as columns) of a Hermitian matrix.
#[pyfunction]
fn hermitian_eig(h: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let eig = linalg::hermitian_eig(&matrix_from_rows(h)?).map_err(to_py)?;
    Ok((eig.eigenvalues.clone(), matrix_to_rows(&eig.eigenvectors)))
}

#[pyfunction]
#[pyo3(signature = (state, split, gap_tol = inv::GAP_TOL))]
fn fingerprint(state: &PyPureState, split: &str, gap_tol: f64) -> PyResult<PyFingerprint> {
    let split = Bipartition::parse(split, state.inner.num_parties()).map_err(to_py)?;
    let inner = inv::fingerprint_with_gap_tol(&state.inner, &split, gap_tol).map_err(to_py)?;
    Ok(PyFingerprint { inner })
}

/// Returns "Distinct", "ConsistentGeneric" or "Inconclusive".
#[pyfunction]
#[pyo3(signature = (a, b, tol = inv::COMPARE_TOL))]
fn compare_fingerprints(a: &PyFingerprint, b: &PyFingerprint, tol: f64) -> PyResult<&'static str> {
    Ok(inv::compare_fingerprints(&a.inner, &b.inner, tol).map_err(to_py)?.as_str())
}

#[pyfunction]
fn check_lu_fidelity(psi: &PyPureState, psi_prime: &PyPureState, unitaries: Vec<Rows>) -> PyResult<f64> {
    let us = unitaries.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
    eq::check_lu_fidelity(&psi.inner, &psi_prime.inner, &us).map_err(to_py)
}

#[pyfunction]
fn match_purification(psi: &PyPureState, psi_prime: &PyPureState, party: usize) -> PyResult<Rows> {
    let w = eq::match_purification(&psi.inner, &psi_prime.inner, party).map_err(to_py)?;
    Ok(matrix_to_rows(&w))
}

#[pyfunction]
fn lift_witness(psi: &PyPureState, psi_prime: &PyPureState, party: usize, witness: Vec<Rows>) -> PyResult<PyLUWitness> {
    let us = witness.into_iter().map(matrix_from_rows).collect::<PyResult<Vec<_>>>()?;
    Ok(eq::lift_witness(&psi.inner, &psi_prime.inner, party, &us).map_err(to_py)?.into())
}

#[pyfunction]
fn search_lu(py: Python<'_>, psi: &PyPureState, psi_prime: &PyPureState, budget: usize, seed: u64) -> PyResult<PyLUWitness> {
    let (a, b) = (&psi.inner, &psi_prime.inner);
    let w = py.detach(|| eq::search_lu(a, b, budget, seed)).map_err(to_py)?;
    Ok(w.into())
}

#[pyfunction]
fn counterexample_report() -> PyCounterexampleReport {
    let r = eq::counterexample_report();
    PyCounterexampleReport {
        reduced_residuals: r.reduced_residuals.to_vec(),
        spectrum_1: r.spectrum_1,
        spectrum_2: r.spectrum_2,
        rank_1: r.rank_1,
        rank_2: r.rank_2,
        max_spectral_gap: r.max_spectral_gap,
        verdict: format!("{:?}", r.verdict),
    }
}

#[pymodule]
#[pyo3(name = "luequiv")]
fn luequiv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_class::<PyFingerprint>()?;
    m.add_class::<PyLUWitness>()?;
    m.add_class::<PyCounterexampleReport>()?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(hermitian_eig, m)?)?;
    m.add_function(wrap_pyfunction!(fingerprint, m)?)?;
    m.add_function(wrap_pyfunction!(compare_fingerprints, m)?)?;
    m.add_function(wrap_pyfunction!(check_lu_fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(match_purification, m)?)?;
    m.add_function(wrap_pyfunction!(lift_witness, m)?)?;
    m.add_function(wrap_pyfunction!(search_lu, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_report, m)?)?;
    Ok(())
}
