//! Python bindings: the spectral pipeline on plain nested lists.
//!
//! Quaternions cross the boundary as `[q0, q1, q2, q3]`, vectors as lists of
//! those, matrices as row-major nested lists. `decompose` returns a
//! `Decomposition` handle; `Decomposition.model()` returns the
//! multiplication-operator `Model`.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use quatspec_core::genvec::{has_simple_spectrum, special_generating_vector, GeneratingVector};
use quatspec_core::hmod::QVector;
use quatspec_core::model::{
    build_model, phi as model_phi, phi_inv as model_phi_inv, verify_equivalence, DiscreteModel,
    ModelFunction,
};
use quatspec_core::quat::{Frame, Quaternion, DEFAULT_TOL};
use quatspec_core::spectral::{spectral_data, QMatrix, SpectralData};
use quatspec_core::verify::decomposition_residuals;

fn to_py_err(err: quatspec_core::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn quat_of(arr: [f64; 4]) -> Quaternion {
    Quaternion::from_coords(arr)
}

fn vec_of(entries: Vec<[f64; 4]>) -> QVector {
    QVector::new(entries.into_iter().map(quat_of).collect())
}

fn vec_out(v: &QVector) -> Vec<[f64; 4]> {
    v.iter().map(|q| q.coords()).collect()
}

fn matrix_of(entries: Vec<Vec<[f64; 4]>>) -> PyResult<QMatrix> {
    QMatrix::from_rows(
        entries
            .into_iter()
            .map(|row| row.into_iter().map(quat_of).collect())
            .collect(),
    )
    .map_err(to_py_err)
}

fn matrix_out(m: &QMatrix) -> Vec<Vec<[f64; 4]>> {
    (0..m.dim())
        .map(|r| (0..m.dim()).map(|c| m.get(r, c).coords()).collect())
        .collect()
}

/// Quaternion product.
#[pyfunction]
fn q_mul(p: [f64; 4], q: [f64; 4]) -> [f64; 4] {
    (quat_of(p) * quat_of(q)).coords()
}

/// Quaternion conjugate.
#[pyfunction]
fn q_conj(q: [f64; 4]) -> [f64; 4] {
    quat_of(q).conj().coords()
}

/// Quaternion absolute value.
#[pyfunction]
fn q_abs(q: [f64; 4]) -> f64 {
    quat_of(q).abs()
}

/// Seeded skew-selfadjoint test matrix (same stream as the CLI `gen`).
#[pyfunction]
#[pyo3(signature = (n, seed, simple=false, zero_atom=false))]
fn generate(n: usize, seed: u64, simple: bool, zero_atom: bool) -> PyResult<Vec<Vec<[f64; 4]>>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    Ok(matrix_out(&quatspec_core::synth::generate(
        n, seed, simple, zero_atom,
    )))
}

/// The spectral pair of one skew-selfadjoint matrix.
#[pyclass]
struct Decomposition {
    a: QMatrix,
    sd: SpectralData,
    tol: f64,
}

#[pymethods]
impl Decomposition {
    /// Atom values `t_k`, ascending.
    #[getter]
    fn atoms(&self) -> Vec<f64> {
        self.sd.atom_values()
    }

    /// Per-atom quaternionic multiplicities.
    #[getter]
    fn h_ranks(&self) -> Vec<usize> {
        self.sd.h_ranks()
    }

    #[getter]
    fn is_simple(&self) -> bool {
        has_simple_spectrum(&self.sd, self.tol)
    }

    #[getter]
    fn n(&self) -> usize {
        self.sd.n()
    }

    /// The projection at atom `k`, row-major.
    fn e(&self, k: usize) -> PyResult<Vec<Vec<[f64; 4]>>> {
        if k >= self.sd.num_atoms() {
            return Err(PyValueError::new_err(format!("no atom {k}")));
        }
        Ok(matrix_out(self.sd.e(k)))
    }

    /// Standard-basis action of `J` (columns `J e_c`).
    fn j_matrix(&self) -> Vec<Vec<[f64; 4]>> {
        matrix_out(&self.sd.j().to_qmatrix())
    }

    /// Applies `J` to a vector.
    fn apply_j(&self, x: Vec<[f64; 4]>) -> PyResult<Vec<[f64; 4]>> {
        if x.len() != self.sd.n() {
            return Err(PyValueError::new_err("length mismatch"));
        }
        Ok(vec_out(&self.sd.j().apply(&vec_of(x))))
    }

    /// `sum_k t_k J E_k`, which reassembles the input matrix.
    fn reconstruct(&self) -> Vec<Vec<[f64; 4]>> {
        matrix_out(&self.sd.reconstruct())
    }

    /// Named invariant residuals of the decomposition.
    fn residuals(&self) -> BTreeMap<String, f64> {
        decomposition_residuals(&self.a, &self.sd)
            .into_iter()
            .collect()
    }

    /// Generating vector with `Jg = R_f g`: returns `(g, residual, rank)`.
    fn generating_vector(&self) -> PyResult<(Vec<[f64; 4]>, f64, usize)> {
        let gv = self.gen_vec()?;
        Ok((
            vec_out(&gv.g),
            gv.certificate.j_residual,
            gv.certificate.cyclic_rank,
        ))
    }

    /// The multiplication-operator model (requires a simple spectrum).
    fn model(&self) -> PyResult<Model> {
        let gv = self.gen_vec()?;
        let model = build_model(&self.sd, &gv, self.tol).map_err(to_py_err)?;
        Ok(Model {
            a: self.a.clone(),
            sd: self.sd.clone(),
            model,
            tol: self.tol,
        })
    }
}

impl Decomposition {
    fn gen_vec(&self) -> PyResult<GeneratingVector> {
        special_generating_vector(&self.sd, self.tol).map_err(to_py_err)
    }
}

/// The discrete multiplication-operator model of a decomposition.
#[pyclass]
struct Model {
    a: QMatrix,
    sd: SpectralData,
    model: DiscreteModel,
    tol: f64,
}

#[pymethods]
impl Model {
    #[getter]
    fn atoms(&self) -> Vec<f64> {
        self.model.measure().atoms().to_vec()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.model.measure().weights().to_vec()
    }

    #[getter]
    fn g(&self) -> Vec<[f64; 4]> {
        vec_out(self.model.g())
    }

    /// `Phi h` for a model function given as one value per atom.
    fn phi(&self, values: Vec<[f64; 4]>) -> PyResult<Vec<[f64; 4]>> {
        let h = ModelFunction::new(values.into_iter().map(quat_of).collect());
        Ok(vec_out(&model_phi(&self.model, &h).map_err(to_py_err)?))
    }

    /// `Phi^{-1} x` as one value per atom.
    fn phi_inv(&self, x: Vec<[f64; 4]>) -> PyResult<Vec<[f64; 4]>> {
        if x.len() != self.sd.n() {
            return Err(PyValueError::new_err("length mismatch"));
        }
        let h = model_phi_inv(&self.model, &vec_of(x)).map_err(to_py_err)?;
        Ok(h.values().iter().map(|q| q.coords()).collect())
    }

    /// Equivalence residuals and the overall verdict.
    fn verify(&self) -> PyResult<(BTreeMap<String, f64>, bool)> {
        let report =
            verify_equivalence(&self.a, &self.sd, &self.model, self.tol).map_err(to_py_err)?;
        let map: BTreeMap<String, f64> = report
            .residuals()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Ok((map, report.pass))
    }
}

/// Decomposes a skew-selfadjoint matrix over the subfield generated by
/// `field` (default: the imaginary unit i).
#[pyfunction]
#[pyo3(signature = (entries, field=None, tol=None))]
fn decompose(
    entries: Vec<Vec<[f64; 4]>>,
    field: Option<[f64; 4]>,
    tol: Option<f64>,
) -> PyResult<Decomposition> {
    let a = matrix_of(entries)?;
    let frame = match field {
        Some(arr) => Frame::from_generator(quat_of(arr)).map_err(to_py_err)?,
        None => Frame::complex(),
    };
    let tol = tol.unwrap_or(DEFAULT_TOL);
    let sd = spectral_data(&a, &frame, tol).map_err(to_py_err)?;
    Ok(Decomposition { a, sd, tol })
}

#[pymodule]
fn quatspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(q_mul, m)?)?;
    m.add_function(wrap_pyfunction!(q_conj, m)?)?;
    m.add_function(wrap_pyfunction!(q_abs, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_class::<Decomposition>()?;
    m.add_class::<Model>()?;
    Ok(())
}
