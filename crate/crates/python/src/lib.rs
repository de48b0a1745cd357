//! Python bindings for the `thermowork` crate.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use thermowork::protocol::{run_protocol as run, BipartiteSystem, ProtocolLedger};
use thermowork::quantum::{
    partial_trace as trace_out, von_neumann_entropy as entropy, CMatrix, DensityMatrix, HermitianOperator, HilbertDims,
    LogBase, Operator, Subsystem, C64,
};
use thermowork::rabi::{exact_diag_oracle, ground_state_with, work_report_with, RabiParams, SolveOptions};
use thermowork::thermo::Temperature;
use thermowork::toymodel::{toy_to_matrices, ToyModelParams};
use thermowork::Error;

fn py_err(e: Error) -> PyErr {
    let msg = format!("[{}] {e}", e.code());
    if e.is_config_error() {
        PyValueError::new_err(msg)
    } else {
        PyRuntimeError::new_err(msg)
    }
}

fn to_matrix(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn hermitian(rows: Vec<Vec<C64>>) -> PyResult<HermitianOperator> {
    HermitianOperator::new(to_matrix(rows)?).map_err(py_err)
}

fn density(rows: Vec<Vec<C64>>) -> PyResult<DensityMatrix> {
    DensityMatrix::new(to_matrix(rows)?).map_err(py_err)
}

fn rabi_params(half_gap: Option<f64>, detuning: Option<f64>, g: f64) -> PyResult<RabiParams> {
    match (half_gap, detuning) {
        (Some(d), None) => RabiParams::new(d, g).map_err(py_err),
        (None, Some(delta)) => RabiParams::from_detuning(delta, g).map_err(py_err),
        _ => Err(PyValueError::new_err("give exactly one of half_gap and detuning")),
    }
}

fn temperature(beta: Option<f64>) -> PyResult<Temperature> {
    beta.map_or(Ok(Temperature::Zero), |b| Temperature::finite(b).map_err(py_err))
}

fn ledger_dict<'py>(py: Python<'py>, l: &ProtocolLedger) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("F1", l.f1)?;
    d.set_item("F2", l.f2)?;
    d.set_item("F3", l.f3)?;
    d.set_item("F4", l.f4)?;
    d.set_item("hI_t2", l.h_i_t2)?;
    d.set_item("hI_t3", l.h_i_t3)?;
    d.set_item("delta_F_A", l.delta_f_a)?;
    d.set_item("delta_F_B", l.delta_f_b)?;
    d.set_item("defect", l.defect)?;
    d.set_item("W", l.work)?;
    d.set_item("W_local", l.local_work)?;
    d.set_item("eta", l.eta)?;
    d.set_item("eta_local", l.eta_local)?;
    Ok(d)
}

/// Ground energy of `Delta sigma_z + n + g sigma_x (a + a^dagger)`.
#[pyfunction]
#[pyo3(signature = (g, half_gap=None, detuning=None))]
fn rabi_ground_energy(g: f64, half_gap: Option<f64>, detuning: Option<f64>) -> PyResult<f64> {
    let p = rabi_params(half_gap, detuning, g)?;
    Ok(ground_state_with(p, &SolveOptions::default()).map_err(py_err)?.e0)
}

/// Ground state as `{"E0", "coefficients", "method", "precision_bits"}`;
/// `coefficients[n]` is the amplitude on the parity chain state with `n` quanta.
#[pyfunction]
#[pyo3(signature = (g, half_gap=None, detuning=None, fock_cap=2000))]
fn rabi_ground_state<'py>(
    py: Python<'py>,
    g: f64,
    half_gap: Option<f64>,
    detuning: Option<f64>,
    fock_cap: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let p = rabi_params(half_gap, detuning, g)?;
    let opts = SolveOptions { fock_cap, ..Default::default() };
    let gs = ground_state_with(p, &opts).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("E0", gs.e0)?;
    d.set_item("coefficients", gs.c.clone())?;
    d.set_item("method", format!("{:?}", gs.method))?;
    d.set_item("precision_bits", gs.precision_bits)?;
    Ok(d)
}

/// Work, efficiencies and entanglement of the Rabi ground state.
#[pyfunction]
#[pyo3(signature = (g, half_gap=None, detuning=None, fock_cap=2000, oracle_check=false))]
fn rabi_work_report<'py>(
    py: Python<'py>,
    g: f64,
    half_gap: Option<f64>,
    detuning: Option<f64>,
    fock_cap: usize,
    oracle_check: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let p = rabi_params(half_gap, detuning, g)?;
    let opts = SolveOptions { fock_cap, oracle_check, precision_bits: None };
    let r = work_report_with(p, &opts).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("half_gap", p.half_gap())?;
    d.set_item("g", p.coupling())?;
    d.set_item("E0", r.e0)?;
    d.set_item("hA", r.h_a)?;
    d.set_item("hB", r.h_b)?;
    d.set_item("hI", r.h_i)?;
    d.set_item("W", r.work)?;
    d.set_item("W_A", r.work_a)?;
    d.set_item("W_B", r.work_b)?;
    d.set_item("eta", r.eta)?;
    d.set_item("eta_A", r.eta_a)?;
    d.set_item("eta_B", r.eta_b)?;
    d.set_item("entanglement_bits", r.entanglement_bits)?;
    d.set_item("n_fock", r.n_fock)?;
    d.set_item("method", format!("{:?}", r.method))?;
    Ok(d)
}

/// Lowest eigenvalue of the Rabi Hamiltonian truncated at `n_cut` quanta.
#[pyfunction]
#[pyo3(signature = (g, n_cut, half_gap=None, detuning=None))]
fn rabi_exact_diag_energy(g: f64, n_cut: usize, half_gap: Option<f64>, detuning: Option<f64>) -> PyResult<f64> {
    let p = rabi_params(half_gap, detuning, g)?;
    Ok(exact_diag_oracle(p, n_cut).map_err(py_err)?.energy)
}

/// Switching protocol on square matrices given as nested lists; zero
/// temperature when `beta` is omitted.
#[pyfunction]
#[pyo3(signature = (h_a, h_b, h_i, beta=None))]
fn run_protocol<'py>(
    py: Python<'py>,
    h_a: Vec<Vec<C64>>,
    h_b: Vec<Vec<C64>>,
    h_i: Vec<Vec<C64>>,
    beta: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let sys = BipartiteSystem::new(hermitian(h_a)?, hermitian(h_b)?, hermitian(h_i)?).map_err(py_err)?;
    let l = run(&sys, temperature(beta)?).map_err(py_err)?;
    ledger_dict(py, &l)
}

/// `(W, eta)` of the diagonal toy model, both from the closed form and
/// from the generic protocol on its matrices.
#[pyfunction]
fn toy_model<'py>(
    py: Python<'py>,
    levels_a: Vec<f64>,
    levels_b: Vec<f64>,
    n: usize,
    m: usize,
    coupling: f64,
    epsilon: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let p = ToyModelParams::new(levels_a, levels_b, n, m, coupling, epsilon).map_err(py_err)?;
    let (w, eta) = thermowork::toymodel::toy_closed_form(&p);
    let sys = toy_to_matrices(&p, p.levels_a().len(), p.levels_b().len()).map_err(py_err)?;
    let l = run(&sys, Temperature::Zero).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("W", w)?;
    d.set_item("eta", eta)?;
    d.set_item("W_protocol", l.work)?;
    d.set_item("eta_protocol", l.eta)?;
    Ok(d)
}

/// Von Neumann entropy in bits, or nats with `bits=False`.
#[pyfunction]
#[pyo3(signature = (rho, bits=true))]
fn von_neumann_entropy(rho: Vec<Vec<C64>>, bits: bool) -> PyResult<f64> {
    let base = if bits { LogBase::Two } else { LogBase::Natural };
    entropy(&density(rho)?, base).map_err(py_err)
}

/// Reduced state of subsystem `keep` ("A" or "B").
#[pyfunction]
fn partial_trace(rho: Vec<Vec<C64>>, d_a: usize, d_b: usize, keep: &str) -> PyResult<Vec<Vec<C64>>> {
    let side = match keep {
        "A" => Subsystem::A,
        "B" => Subsystem::B,
        other => return Err(PyValueError::new_err(format!("keep must be \"A\" or \"B\", got {other:?}"))),
    };
    let dims = HilbertDims::new(d_a, d_b).map_err(py_err)?;
    let r = trace_out(&density(rho)?, dims, side).map_err(py_err)?;
    Ok(from_matrix(r.matrix()))
}

#[pymodule]
fn thermowork_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(rabi_ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_work_report, m)?)?;
    m.add_function(wrap_pyfunction!(rabi_exact_diag_energy, m)?)?;
    m.add_function(wrap_pyfunction!(run_protocol, m)?)?;
    m.add_function(wrap_pyfunction!(toy_model, m)?)?;
    m.add_function(wrap_pyfunction!(von_neumann_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(partial_trace, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
