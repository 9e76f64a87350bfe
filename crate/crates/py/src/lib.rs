//! Python bindings: gas model, invariants, smooth profiles and shock problems.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use serde::Serialize;
use swirlflow as sf;

create_exception!(swirlflow, FlowError, PyValueError);

type SweepTuple = (f64, f64, f64, f64, f64, &'static str);

fn to_py<T>(r: sf::Result<T>) -> PyResult<T> {
    r.map_err(|e| FlowError::new_err(e.to_string()))
}

fn json_object<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn branch(supersonic: bool) -> sf::Branch {
    if supersonic {
        sf::Branch::RadialSupersonic
    } else {
        sf::Branch::RadialSubsonic
    }
}

#[pyclass(frozen, name = "GasModel", module = "swirlflow", skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyGasModel(sf::GasModel);

#[pymethods]
impl PyGasModel {
    #[new]
    #[pyo3(signature = (gamma, tol_residual=None, tol_root=None, eps_sonic=None))]
    fn new(gamma: f64, tol_residual: Option<f64>, tol_root: Option<f64>, eps_sonic: Option<f64>) -> PyResult<Self> {
        to_py(sf::GasModel::with_tolerances(
            gamma,
            tol_residual.unwrap_or(sf::GasModel::DEFAULT_TOL_RESIDUAL),
            tol_root.unwrap_or(sf::GasModel::DEFAULT_TOL_ROOT),
            eps_sonic.unwrap_or(sf::GasModel::DEFAULT_EPS_SONIC),
        ))
        .map(Self)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.0.gamma
    }

    fn pressure(&self, a: f64, rho: f64) -> f64 {
        self.0.pressure(a, rho)
    }

    fn entropy_ratio(&self, x: f64) -> PyResult<f64> {
        to_py(sf::entropy_ratio(&self.0, x))
    }

    fn __repr__(&self) -> String {
        format!("GasModel(gamma={})", self.0.gamma)
    }
}

#[pyclass(frozen, name = "FlowState", module = "swirlflow", skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyFlowState(sf::FlowState);

#[pymethods]
impl PyFlowState {
    #[getter]
    fn r(&self) -> f64 {
        self.0.r
    }
    #[getter]
    fn rho(&self) -> f64 {
        self.0.rho
    }
    #[getter]
    fn u1(&self) -> f64 {
        self.0.u1
    }
    #[getter]
    fn u2(&self) -> f64 {
        self.0.u2
    }
    #[getter]
    fn p(&self) -> f64 {
        self.0.p
    }
    #[getter]
    fn c2(&self) -> f64 {
        self.0.c2
    }
    #[getter]
    fn m1sq(&self) -> f64 {
        self.0.m1sq
    }
    #[getter]
    fn m2sq(&self) -> f64 {
        self.0.m2sq
    }
    #[getter]
    fn msq(&self) -> f64 {
        self.0.msq
    }

    fn as_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_object(py, &self.0)
    }

    fn __repr__(&self) -> String {
        let s = &self.0;
        format!("FlowState(r={}, rho={}, u1={}, u2={}, p={}, msq={})", s.r, s.rho, s.u1, s.u2, s.p, s.msq)
    }
}

#[pyclass(frozen, name = "FlowInvariants", module = "swirlflow", skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyFlowInvariants(sf::FlowInvariants);

#[pymethods]
impl PyFlowInvariants {
    #[new]
    #[pyo3(signature = (kappa1, kappa2, b0, a, inward=false))]
    fn new(kappa1: f64, kappa2: f64, b0: f64, a: f64, inward: bool) -> PyResult<Self> {
        let dir = if inward { sf::Direction::Inward } else { sf::Direction::Outward };
        to_py(sf::FlowInvariants::new(kappa1, kappa2, b0, a, dir)).map(Self)
    }

    /// Invariants of the flow through boundary data `(r, rho, u1, u2, A)`.
    #[staticmethod]
    #[pyo3(name = "from_boundary", signature = (gas, r, rho, u1, u2, a))]
    fn py_from_boundary(gas: &PyGasModel, r: f64, rho: f64, u1: f64, u2: f64, a: f64) -> PyResult<Self> {
        to_py(sf::FlowInvariants::from_boundary(&gas.0, &sf::BoundaryState::new(r, rho, u1, u2, a))).map(Self)
    }

    #[getter]
    fn kappa1(&self) -> f64 {
        self.0.kappa1
    }
    #[getter]
    fn kappa2(&self) -> f64 {
        self.0.kappa2
    }
    #[getter]
    fn b0(&self) -> f64 {
        self.0.b0
    }
    #[getter(A)]
    fn a(&self) -> f64 {
        self.0.a
    }
    #[getter]
    fn inward(&self) -> bool {
        self.0.direction == sf::Direction::Inward
    }

    fn with_entropy(&self, a: f64) -> Self {
        Self(self.0.with_entropy(a))
    }

    fn vacuum_radius(&self) -> f64 {
        self.0.vacuum_radius()
    }

    fn critical_density(&self, gas: &PyGasModel) -> f64 {
        self.0.critical_density(&gas.0)
    }

    fn sonic_radius(&self, gas: &PyGasModel) -> f64 {
        sf::sonic_radius(&gas.0, &self.0)
    }

    fn limiting_radius(&self, gas: &PyGasModel) -> PyResult<f64> {
        to_py(sf::limiting_radius(&gas.0, &self.0))
    }

    fn swirl_sonic_radius(&self, gas: &PyGasModel) -> f64 {
        sf::swirl_sonic_radius(&gas.0, &self.0)
    }

    fn coincidence_radius(&self, gas: &PyGasModel) -> PyResult<f64> {
        to_py(sf::coincidence_radius(&gas.0, &self.0))
    }

    fn __repr__(&self) -> String {
        let i = &self.0;
        format!(
            "FlowInvariants(kappa1={}, kappa2={}, b0={}, A={}, inward={})",
            i.kappa1,
            i.kappa2,
            i.b0,
            i.a,
            self.inward()
        )
    }
}

/// State on the chosen branch at radius `r`.
#[pyfunction]
#[pyo3(signature = (gas, inv, r, supersonic=true))]
fn solve_state(gas: &PyGasModel, inv: &PyFlowInvariants, r: f64, supersonic: bool) -> PyResult<PyFlowState> {
    to_py(sf::solve_state(&gas.0, &inv.0, r, branch(supersonic))).map(PyFlowState)
}

/// `n` states on the chosen branch over `[r0, r1]`.
#[pyfunction]
#[pyo3(signature = (gas, inv, r0, r1, n, supersonic=true))]
fn profile(
    gas: &PyGasModel,
    inv: &PyFlowInvariants,
    r0: f64,
    r1: f64,
    n: usize,
    supersonic: bool,
) -> PyResult<Vec<PyFlowState>> {
    let prof = to_py(sf::profile(&gas.0, &inv.0, branch(supersonic), r0, r1, n))?;
    Ok(prof.states.into_iter().map(PyFlowState).collect())
}

/// Downstream state and entropy constant behind a shock at `state`.
#[pyfunction]
fn rh_jump(gas: &PyGasModel, inv: &PyFlowInvariants, state: &PyFlowState) -> PyResult<(PyFlowState, f64)> {
    to_py(sf::rh_jump(&gas.0, &inv.0, &state.0)).map(|(s, a)| (PyFlowState(s), a))
}

/// Smooth-flow classification of boundary data on the annulus as a dict.
#[pyfunction]
fn classify_smooth<'py>(
    py: Python<'py>,
    gas: &PyGasModel,
    boundary: (f64, f64, f64, f64, f64),
    other_radius: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let (r, rho, u1, u2, a) = boundary;
    let b = sf::BoundaryState::new(r, rho, u1, u2, a);
    let report = if u1 >= 0.0 {
        sf::classify_outward(&gas.0, &b, other_radius)
    } else {
        sf::classify_inward(&gas.0, &b, other_radius)
    };
    let report = to_py(report)?;
    let dict = PyDict::new(py);
    dict.set_item("regime", report.regime.label())?;
    dict.set_item("r_c", report.r_c)?;
    dict.set_item("r_sharp", report.r_sharp)?;
    Ok(dict.into_any())
}

#[pyclass(frozen, name = "ShockSolution", module = "swirlflow", skip_from_py_object)]
pub struct PyShockSolution {
    gas: sf::GasModel,
    sol: sf::ShockSolution,
}

#[pymethods]
impl PyShockSolution {
    #[getter]
    fn r_b(&self) -> f64 {
        self.sol.r_b
    }
    #[getter]
    fn p_exit(&self) -> f64 {
        self.sol.p_exit
    }
    #[getter]
    fn a_plus(&self) -> f64 {
        self.sol.a_plus
    }
    #[getter]
    fn x(&self) -> f64 {
        self.sol.x
    }
    #[getter]
    fn upstream(&self) -> PyFlowState {
        PyFlowState(self.sol.upstream)
    }
    #[getter]
    fn downstream(&self) -> PyFlowState {
        PyFlowState(self.sol.downstream)
    }
    #[getter]
    fn exit(&self) -> PyFlowState {
        PyFlowState(self.sol.exit)
    }
    #[getter]
    fn pattern(&self) -> &'static str {
        self.sol.regime.pattern.label()
    }
    #[getter]
    fn subcase(&self) -> String {
        self.sol.regime.subcase.clone()
    }

    /// Classification diagnostics as a dict.
    fn regime<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        json_object(py, &self.sol.regime)
    }

    /// Upstream and downstream profiles with `n` samples in total, as
    /// `(region, states)` pairs in ascending radius.
    fn profiles(&self, n: usize) -> PyResult<Vec<(&'static str, Vec<PyFlowState>)>> {
        let profiles = to_py(self.sol.profiles(&self.gas, n))?;
        Ok(profiles
            .into_iter()
            .map(|p| (p.region.label(), p.states.into_iter().map(PyFlowState).collect()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "ShockSolution(r_b={}, p_exit={}, pattern={})",
            self.sol.r_b,
            self.sol.p_exit,
            self.pattern()
        )
    }
}

#[pyclass(frozen, name = "ShockProblem", module = "swirlflow", skip_from_py_object)]
pub struct PyShockProblem(sf::ShockProblem);

#[pymethods]
impl PyShockProblem {
    #[new]
    fn new(gas: &PyGasModel, inv: &PyFlowInvariants, r0: f64, r1: f64) -> PyResult<Self> {
        to_py(sf::ShockProblem::new(gas.0, inv.0, r0, r1)).map(Self)
    }

    /// Problem with data `(r, rho, u1, u2, A)` on one circle and the exit on
    /// `other_radius`.
    #[staticmethod]
    fn from_boundary(gas: &PyGasModel, boundary: (f64, f64, f64, f64, f64), other_radius: f64) -> PyResult<Self> {
        let (r, rho, u1, u2, a) = boundary;
        to_py(sf::ShockProblem::from_boundary(
            gas.0,
            &sf::BoundaryState::new(r, rho, u1, u2, a),
            other_radius,
        ))
        .map(Self)
    }

    #[getter]
    fn r0(&self) -> f64 {
        self.0.r0
    }
    #[getter]
    fn r1(&self) -> f64 {
        self.0.r1
    }
    #[getter]
    fn invariants(&self) -> PyFlowInvariants {
        PyFlowInvariants(self.0.inv)
    }

    /// Admissible exit pressures as `(p1, p0)`.
    fn pressure_interval(&self) -> PyResult<(f64, f64)> {
        to_py(self.0.pressure_interval()).map(|iv| (iv.p1, iv.p0))
    }

    fn exit_pressure(&self, r_b: f64) -> PyResult<f64> {
        to_py(self.0.exit_pressure(r_b))
    }

    fn solve(&self, p_exit: f64) -> PyResult<PyShockSolution> {
        let sol = to_py(self.0.solve(p_exit))?;
        Ok(PyShockSolution { gas: self.0.gas, sol })
    }

    /// `n` rows of `(r_b, p_exit, a_plus, x, downstream_msq, regime)`.
    fn sweep(&self, n: usize) -> PyResult<Vec<SweepTuple>> {
        let rows = to_py(self.0.sweep(n))?;
        Ok(rows
            .iter()
            .map(|r| (r.r_b, r.p_exit, r.a_plus, r.x, r.downstream_msq, r.pattern.label()))
            .collect())
    }

    fn __repr__(&self) -> String {
        format!("ShockProblem(r0={}, r1={})", self.0.r0, self.0.r1)
    }
}

#[pymodule]
#[pyo3(name = "swirlflow")]
fn swirlflow_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FlowError", m.py().get_type::<FlowError>())?;
    m.add_class::<PyGasModel>()?;
    m.add_class::<PyFlowState>()?;
    m.add_class::<PyFlowInvariants>()?;
    m.add_class::<PyShockProblem>()?;
    m.add_class::<PyShockSolution>()?;
    m.add_function(wrap_pyfunction!(solve_state, m)?)?;
    m.add_function(wrap_pyfunction!(profile, m)?)?;
    m.add_function(wrap_pyfunction!(rh_jump, m)?)?;
    m.add_function(wrap_pyfunction!(classify_smooth, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup_a() -> (PyGasModel, PyFlowInvariants) {
        (
            PyGasModel::new(2.0, None, None, None).unwrap(),
            PyFlowInvariants::new(1.0, 1.0, 3.0, 1.0, false).unwrap(),
        )
    }

    #[test]
    fn wrappers_forward_to_core() {
        let (gas, inv) = setup_a();
        let s = solve_state(&gas, &inv, 1.0, true).unwrap();
        assert!((s.rho() - (0.5 + 4.25f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!((inv.limiting_radius(&gas).unwrap() - 0.9562441).abs() < 1e-6);
        let pb = PyShockProblem::new(&gas, &inv, 1.0, 1.2).unwrap();
        let (p1, p0) = pb.pressure_interval().unwrap();
        assert!(p1 < 1.2 && 1.2 < p0);
        let rows = pb.sweep(3).unwrap();
        assert!(rows[0].1 > rows[1].1 && rows[1].1 > rows[2].1);
    }

    #[test]
    fn solver_errors_become_flow_error() {
        Python::initialize();
        Python::attach(|py| {
            let (gas, inv) = setup_a();
            let err = PyShockProblem::new(&gas, &inv, 1.0, 1.2).unwrap().solve(50.0).err().unwrap();
            assert!(err.is_instance_of::<FlowError>(py));
            assert!(err.is_instance_of::<PyValueError>(py));
        });
    }
}
