//! Python bindings. Matrices cross the boundary as [`Matrix`] objects, which
//! convert to and from nested lists of complex numbers.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rindler_core::analysis::{self, FigureId, FigureOptions};
use rindler_core::measures;
use rindler_core::states::{self, NptFamily};
use rindler_core::{
    AcceleratedSlot, AlphaBeta, Bipartition, ComplexMatrix, DiscordOptions, FractionP, OracleResolution, RindlerR,
    Side,
};

fn err(e: rindler_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn side(name: &str) -> PyResult<Side> {
    match name {
        "first" => Ok(Side::First),
        "second" => Ok(Side::Second),
        _ => Err(PyValueError::new_err(format!("side must be 'first' or 'second', got {name:?}"))),
    }
}

fn fp(p: f64) -> PyResult<FractionP> {
    FractionP::new(p).map_err(err)
}

fn rr(r: f64) -> PyResult<RindlerR> {
    RindlerR::new(r).map_err(err)
}

fn ab(beta: f64) -> PyResult<AlphaBeta> {
    AlphaBeta::from_beta(beta).map_err(err)
}

/// Dense complex square matrix.
#[pyclass(name = "Matrix", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyMatrix {
    inner: ComplexMatrix,
}

impl From<ComplexMatrix> for PyMatrix {
    fn from(inner: ComplexMatrix) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PyValueError::new_err("matrix must be square"));
        }
        let entries = rows.into_iter().flatten().collect();
        Ok(ComplexMatrix::new(dim, entries).map_err(err)?.into())
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        self.inner.entries().chunks(self.inner.dim()).map(<[_]>::to_vec).collect()
    }

    /// Eigenvalues in descending order (Hermitian input only).
    fn eigenvalues(&self) -> PyResult<Vec<f64>> {
        Ok(rindler_core::linalg::hermitian_eigen(&self.inner, false).map_err(err)?.values)
    }

    fn __repr__(&self) -> String {
        format!("Matrix(dim={})", self.inner.dim())
    }
}

#[pyfunction]
fn pseudo_entangled(p: f64) -> PyResult<PyMatrix> {
    Ok(states::pseudo_entangled(fp(p)?).into())
}

#[pyfunction]
fn sigma_x_equivalent(p: f64) -> PyResult<PyMatrix> {
    Ok(states::sigma_x_equivalent(fp(p)?).into())
}

#[pyfunction]
fn rho_ai(p: f64, r: f64) -> PyResult<PyMatrix> {
    Ok(states::rho_ai(fp(p)?, rr(r)?).into())
}

#[pyfunction]
fn rho_aii(p: f64, r: f64) -> PyResult<PyMatrix> {
    Ok(states::rho_aii(fp(p)?, rr(r)?).into())
}

#[pyfunction]
fn rho_iii(r: f64) -> PyResult<PyMatrix> {
    Ok(states::rho_iii(rr(r)?).into())
}

#[pyfunction]
fn rho_ib(beta: f64, r: f64) -> PyResult<PyMatrix> {
    Ok(states::rho_ib(ab(beta)?, rr(r)?).into())
}

#[pyfunction]
fn rho_tilde_ib(beta: f64, r: f64) -> PyResult<PyMatrix> {
    Ok(states::rho_tilde_ib(ab(beta)?, rr(r)?).into())
}

/// Accelerates one qubit of a two-qubit state; returns the 8×8 tripartite state.
#[pyfunction]
#[pyo3(signature = (rho, r, slot = "second"))]
fn unruh_channel(rho: &PyMatrix, r: f64, slot: &str) -> PyResult<PyMatrix> {
    let slot = match side(slot)? {
        Side::First => AcceleratedSlot::First,
        Side::Second => AcceleratedSlot::Second,
    };
    Ok(states::unruh_channel(&rho.inner, rr(r)?, slot).map_err(err)?.into())
}

#[pyfunction]
fn acceleration_to_r(acceleration: f64, omega: f64) -> PyResult<f64> {
    Ok(states::acceleration_to_r(acceleration, omega).map_err(err)?.value())
}

#[pyfunction]
#[pyo3(signature = (rho, measured_side = "second"))]
fn log_negativity(rho: &PyMatrix, measured_side: &str) -> PyResult<f64> {
    measures::log_negativity(&rho.inner, &Bipartition::qubits(side(measured_side)?)).map_err(err)
}

#[pyfunction]
fn concurrence(rho: &PyMatrix) -> PyResult<f64> {
    measures::concurrence(&rho.inner).map_err(err)
}

#[pyfunction]
fn entanglement_of_formation(rho: &PyMatrix) -> PyResult<f64> {
    measures::entanglement_of_formation(&rho.inner).map_err(err)
}

#[pyfunction]
fn mutual_information(rho: &PyMatrix) -> PyResult<f64> {
    measures::mutual_information(&rho.inner, &Bipartition::default()).map_err(err)
}

/// Directional discord as a dict with the information decomposition and the
/// minimizing measurement direction `(theta, phi)`.
#[pyfunction]
#[pyo3(signature = (rho, measured_side = "second", force_oracle = false, resolution = 64))]
fn discord<'py>(
    py: Python<'py>,
    rho: &PyMatrix,
    measured_side: &str,
    force_oracle: bool,
    resolution: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let options = DiscordOptions {
        force_oracle,
        resolution: OracleResolution {
            theta_points: resolution,
            phi_points: 2 * resolution,
        },
    };
    let d = measures::discord_with(&rho.inner, &Bipartition::qubits(side(measured_side)?), &options)
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("discord", d.discord)?;
    out.set_item("mutual_information", d.mutual_information)?;
    out.set_item("classical_correlation", d.classical_correlation)?;
    out.set_item("min_conditional_entropy", d.min_conditional_entropy)?;
    out.set_item("argmin", d.argmin.to_bloch())?;
    out.set_item(
        "method",
        match d.method {
            measures::DiscordMethod::XstateFast => "xstate_fast",
            measures::DiscordMethod::Oracle => "oracle",
        },
    )?;
    Ok(out)
}

fn npt(family: &str) -> PyResult<NptFamily> {
    match family.to_ascii_uppercase().as_str() {
        "AI" => Ok(NptFamily::AI),
        "AII" => Ok(NptFamily::AII),
        _ => Err(PyValueError::new_err(format!("family must be 'AI' or 'AII', got {family:?}"))),
    }
}

/// Critical `p`, or `None` when the family is separable for every `p`.
#[pyfunction]
#[pyo3(signature = (r, family = "AI"))]
fn critical_p(r: f64, family: &str) -> PyResult<Option<f64>> {
    Ok(analysis::critical_p(rr(r)?, npt(family)?).value())
}

/// Critical `r` of A:I; zero if already separable, `None` if entangled at every `r`.
#[pyfunction]
fn critical_r(p: f64) -> PyResult<Option<f64>> {
    Ok(analysis::critical_r(fp(p)?).r_star())
}

#[pyfunction]
fn extremal_beta(r: f64) -> PyResult<(f64, f64)> {
    let best = analysis::extremal_beta(rr(r)?).map_err(err)?;
    Ok((best.beta, best.gap))
}

/// Dataset for figure `id` as `(columns, rows)`.
#[pyfunction]
#[pyo3(signature = (id, r_points = 65, p_points = 65))]
fn figure(id: u32, r_points: usize, p_points: usize) -> PyResult<(Vec<String>, Vec<Vec<f64>>)> {
    let options = FigureOptions {
        r_points,
        p_points,
        ..FigureOptions::default()
    };
    let table = analysis::figure_table(FigureId::from_number(id).map_err(err)?, &options).map_err(err)?;
    Ok((table.columns().to_vec(), table.rows().to_vec()))
}

#[pyfunction]
fn verify_claims(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    analysis::verify_claims()
        .into_iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("id", c.id)?;
            d.set_item("description", c.description)?;
            d.set_item("target", c.target)?;
            d.set_item("measured", c.measured)?;
            d.set_item("tolerance", c.tolerance)?;
            d.set_item("pass", c.pass)?;
            d.set_item("note", c.note)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn rindler(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyMatrix>()?;
    m.add_function(wrap_pyfunction!(pseudo_entangled, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_x_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(rho_ai, m)?)?;
    m.add_function(wrap_pyfunction!(rho_aii, m)?)?;
    m.add_function(wrap_pyfunction!(rho_iii, m)?)?;
    m.add_function(wrap_pyfunction!(rho_ib, m)?)?;
    m.add_function(wrap_pyfunction!(rho_tilde_ib, m)?)?;
    m.add_function(wrap_pyfunction!(unruh_channel, m)?)?;
    m.add_function(wrap_pyfunction!(acceleration_to_r, m)?)?;
    m.add_function(wrap_pyfunction!(log_negativity, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(entanglement_of_formation, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(discord, m)?)?;
    m.add_function(wrap_pyfunction!(critical_p, m)?)?;
    m.add_function(wrap_pyfunction!(critical_r, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_beta, m)?)?;
    m.add_function(wrap_pyfunction!(figure, m)?)?;
    m.add_function(wrap_pyfunction!(verify_claims, m)?)?;
    Ok(())
}
