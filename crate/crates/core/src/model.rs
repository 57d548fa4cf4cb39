//! The discrete multiplication-operator model.
//!
//! For a simple-spectrum operator with generating vector `g`, the weights
//! `sigma_k = <E_k g, g>` define an atomic measure on the half-axis, and
//! `Phi h = sum_k (E_k g) * h(lambda_k)` is a unitary from the weighted
//! sequence space onto ℍⁿ. It intertwines the operator with `Q`,
//! `(Qh)(lambda) = lambda h(lambda)`, and transports the whole spectral pair:
//! the model-side measure multiplies by indicators and the model-side `J`
//! maps a value `h1 + h2*phi` to `(h1 - h2*phi)*f`.
//!
//! Every model function has finite support by construction (one value per
//! atom), so the operators below are total and no domain bookkeeping is
//! needed.

use crate::error::{Error, Result};
use crate::genvec::GeneratingVector;
use crate::hmod::{f_orthonormalize, inner, QVector};
use crate::quat::{Frame, Quaternion};
use crate::spectral::{QMatrix, SpectralData};

/// An atomic measure on the half-axis `f_+`.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    frame: Frame,
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Atom positions `t_k` (the atom sits at `t_k * f`), ascending.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Strictly positive atom weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// An element of the model space: one quaternion value per atom.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelFunction {
    values: Vec<Quaternion>,
}

impl ModelFunction {
    pub fn new(values: Vec<Quaternion>) -> Self {
        ModelFunction { values }
    }

    pub fn zeros(len: usize) -> Self {
        ModelFunction {
            values: vec![Quaternion::ZERO; len],
        }
    }

    /// Constant function 1.
    pub fn ones(len: usize) -> Self {
        ModelFunction {
            values: vec![Quaternion::ONE; len],
        }
    }

    /// Indicator of atom `k` times a unit value.
    pub fn indicator(len: usize, k: usize, value: Quaternion) -> Self {
        let mut f = ModelFunction::zeros(len);
        f.values[k] = value;
        f
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, k: usize) -> Quaternion {
        self.values[k]
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn add(&self, rhs: &ModelFunction) -> ModelFunction {
        debug_assert_eq!(self.len(), rhs.len());
        ModelFunction::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &ModelFunction) -> ModelFunction {
        debug_assert_eq!(self.len(), rhs.len());
        ModelFunction::new(
            self.values
                .iter()
                .zip(&rhs.values)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }
}

/// The data of the unitary `Phi` onto the multiplication model.
#[derive(Clone, Debug)]
pub struct DiscreteModel {
    measure: DiscreteMeasure,
    g: QVector,
    /// The images `Phi(chi_k) = E_k g`.
    columns: Vec<QVector>,
}

impl DiscreteModel {
    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn g(&self) -> &QVector {
        &self.g
    }

    pub fn columns(&self) -> &[QVector] {
        &self.columns
    }

    pub fn column(&self, k: usize) -> &QVector {
        &self.columns[k]
    }

    pub fn num_atoms(&self) -> usize {
        self.measure.len()
    }

    /// `|h|² = sum_k |h(lambda_k)|² sigma_k`.
    pub fn norm_sq(&self, h: &ModelFunction) -> f64 {
        h.values
            .iter()
            .zip(self.measure.weights())
            .map(|(v, w)| v.abs_sq() * w)
            .sum()
    }
}

/// Builds the model from a certified generating vector.
///
/// The weights are `sigma_k = re <E_k g, g>`; any weight at or below `tol`
/// contradicts the generating property and is rejected.
pub fn build_model(sd: &SpectralData, gv: &GeneratingVector, tol: f64) -> Result<DiscreteModel> {
    let g = gv.g.clone();
    let mut weights = Vec::with_capacity(sd.num_atoms());
    let mut columns = Vec::with_capacity(sd.num_atoms());
    for k in 0..sd.num_atoms() {
        let col = sd.e(k).matvec(&g);
        let sigma = inner(&col, &g)?;
        let scale = 1.0_f64.max(g.norm_sq());
        if sigma.vector_part().abs() > tol * scale {
            return Err(Error::ConstructionFailed {
                reason: format!("weight at atom {k} is not real: {sigma:?}"),
            });
        }
        if sigma.re() <= tol {
            return Err(Error::DegenerateWeight {
                atom: k,
                weight: sigma.re(),
            });
        }
        weights.push(sigma.re());
        columns.push(col);
    }
    Ok(DiscreteModel {
        measure: DiscreteMeasure {
            frame: *sd.frame(),
            atoms: sd.atom_values(),
            weights,
        },
        g,
        columns,
    })
}

/// `Phi h = sum_k (E_k g) * h(lambda_k)`.
pub fn phi(m: &DiscreteModel, h: &ModelFunction) -> Result<QVector> {
    if h.len() != m.num_atoms() {
        return Err(Error::LengthMismatch {
            left: h.len(),
            right: m.num_atoms(),
        });
    }
    let n = m.g.len();
    let mut acc = QVector::zeros(n);
    for (col, &v) in m.columns.iter().zip(h.values()) {
        acc = acc.add(&col.right_mul(v));
    }
    Ok(acc)
}

/// `Phi^{-1} x`, with values `sigma_k^{-1} <E_k x, E_k g> = sigma_k^{-1} <x, E_k g>`.
///
/// Valid because a simple spectrum makes each `E_k`-range the ℍ-line through
/// `E_k g`, and `<(E_k g) q, E_k g> = sigma_k q` under the fixed convention.
pub fn phi_inv(m: &DiscreteModel, x: &QVector) -> Result<ModelFunction> {
    let mut values = Vec::with_capacity(m.num_atoms());
    for (col, &w) in m.columns.iter().zip(m.measure.weights()) {
        values.push(inner(x, col)?.scale(1.0 / w));
    }
    Ok(ModelFunction::new(values))
}

/// `(Qh)(lambda) = lambda h(lambda)`, left multiplication by `lambda_k = t_k f`.
pub fn q_apply(m: &DiscreteModel, h: &ModelFunction) -> ModelFunction {
    let f = m.measure.frame.f();
    ModelFunction::new(
        m.measure
            .atoms()
            .iter()
            .zip(h.values())
            .map(|(&t, &v)| (f.scale(t)) * v)
            .collect(),
    )
}

/// Model-side spectral measure: `(E(alpha)h)(lambda) = chi_alpha(lambda) h(lambda)`.
pub fn model_spectral_measure(
    m: &DiscreteModel,
    atom_indices: &[usize],
    h: &ModelFunction,
) -> ModelFunction {
    let mut out = ModelFunction::zeros(h.len());
    for &k in atom_indices {
        out.values[k] = h.value(k);
    }
    let _ = m;
    out
}

/// Model-side complex structure: a value `h1 + h2*phi` maps to `(h1 - h2*phi)*f`.
///
/// The split formula holds away from zero; at the zero atom the structure
/// degenerates to the right multiplication `R_f`, matching `J` on a kernel.
pub fn model_j(m: &DiscreteModel, h: &ModelFunction) -> ModelFunction {
    let fr = m.measure.frame;
    ModelFunction::new(
        m.measure
            .atoms()
            .iter()
            .zip(h.values())
            .map(|(&t, &v)| {
                if t == 0.0 {
                    v * fr.f()
                } else {
                    let (u1, u2) = fr.split(v);
                    (fr.embed_f(u1) - fr.embed_f(u2) * fr.phi()) * fr.f()
                }
            })
            .collect(),
    )
}

/// A step generator for the model: values `t'_k f` with `t'_k > 0`.
///
/// Such a function generates the multiplication operator and satisfies the
/// model-side identity `Jg = R_f g`.
pub fn step_generator(m: &DiscreteModel, scales: &[f64]) -> ModelFunction {
    let f = m.measure.frame.f();
    ModelFunction::new(scales.iter().map(|&s| f.scale(s)).collect())
}

/// Residuals of the unitary-equivalence identities.
///
/// All residuals are absolute except the per-function ones, which are
/// relative to the model norm of the probe function. `pass` compares
/// `unitarity` against `tol` and the transported identities against
/// `10 * tol`.
#[derive(Clone, Copy, Debug)]
pub struct EquivalenceReport {
    /// `|Gram({E_k g}) - diag(sigma)|`.
    pub unitarity: f64,
    /// `max_h | |Phi h|² - |h|² | / |h|²`.
    pub isometry: f64,
    /// `max_h |A Phi h - Phi(Q h)| / |h|`.
    pub intertwining: f64,
    /// `max_{alpha,h} |Phi(E_model(alpha) h) - E(alpha) Phi h| / |h|`.
    pub measure_transport: f64,
    /// `max_h |Phi(J_model h) - J Phi h| / |h|`.
    pub j_transport: f64,
    /// `2n` minus the F-rank of `{E_k g, E_k g phi}`; zero when `Phi` is onto.
    pub surjectivity_defect: f64,
    pub pass: bool,
}

impl EquivalenceReport {
    pub fn residuals(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("model_unitarity", self.unitarity),
            ("model_isometry", self.isometry),
            ("model_intertwining", self.intertwining),
            ("model_measure_transport", self.measure_transport),
            ("model_j_transport", self.j_transport),
            ("model_surjectivity_defect", self.surjectivity_defect),
        ]
    }
}

/// Verifies that the model transports `A` and its spectral pair.
///
/// Probes run over the real basis of the model space (indicator times
/// `1, f, phi, f*phi` at every atom), which spans it over the reals, so the
/// identities extend to all functions by linearity. Atom subsets are probed
/// on singletons; both sides of the measure identity are additive in the
/// subset.
pub fn verify_equivalence(
    a: &QMatrix,
    sd: &SpectralData,
    m: &DiscreteModel,
    tol: f64,
) -> Result<EquivalenceReport> {
    let natoms = m.num_atoms();
    let fr = m.measure.frame;

    let mut unitarity_sq = 0.0;
    for k in 0..natoms {
        for l in 0..natoms {
            let mut gram = inner(m.column(k), m.column(l))?;
            if k == l {
                gram = gram - Quaternion::real(m.measure.weights()[k]);
            }
            unitarity_sq += gram.abs_sq();
        }
    }
    let unitarity = unitarity_sq.sqrt();

    let units = [Quaternion::ONE, fr.f(), fr.phi(), fr.fphi()];
    let mut isometry = 0.0_f64;
    let mut intertwining = 0.0_f64;
    let mut measure_transport = 0.0_f64;
    let mut j_transport = 0.0_f64;
    let singletons: Vec<Vec<usize>> = (0..natoms).map(|s| vec![s]).collect();

    let mut probes: Vec<ModelFunction> = Vec::with_capacity(4 * natoms + 2);
    for k in 0..natoms {
        for &u in &units {
            probes.push(ModelFunction::indicator(natoms, k, u));
        }
    }
    probes.push(ModelFunction::ones(natoms));
    probes.push(ModelFunction::new(
        (0..natoms)
            .map(|_| (Quaternion::ONE + fr.f() + fr.phi() + fr.fphi()).scale(0.5))
            .collect(),
    ));

    for h in &probes {
        let h_norm_sq = m.norm_sq(h);
        let h_norm = h_norm_sq.sqrt();
        let image = phi(m, h)?;
        isometry = isometry.max((image.norm_sq() - h_norm_sq).abs() / h_norm_sq);
        let lhs = a.matvec(&image);
        let rhs = phi(m, &q_apply(m, h))?;
        intertwining = intertwining.max(lhs.dist(&rhs) / h_norm);
        for (s, subset) in singletons.iter().enumerate() {
            let lhs = phi(m, &model_spectral_measure(m, subset, h))?;
            let rhs = sd.e(s).matvec(&image);
            measure_transport = measure_transport.max(lhs.dist(&rhs) / h_norm);
        }
        let lhs = phi(m, &model_j(m, h))?;
        let rhs = sd.j().apply(&image);
        j_transport = j_transport.max(lhs.dist(&rhs) / h_norm);
    }

    let mut doubled = Vec::with_capacity(2 * natoms);
    for col in &m.columns {
        doubled.push(col.clone());
        doubled.push(col.right_mul(fr.phi()));
    }
    let f_rank = f_orthonormalize(&doubled, &fr, tol).rank();
    let surjectivity_defect = (2 * m.g.len()) as f64 - f_rank as f64;

    let loose = 10.0 * tol;
    let pass = unitarity <= tol
        && surjectivity_defect == 0.0
        && isometry <= loose
        && intertwining <= loose
        && measure_transport <= loose
        && j_transport <= loose;
    Ok(EquivalenceReport {
        unitarity,
        isometry,
        intertwining,
        measure_transport,
        j_transport,
        surjectivity_defect,
        pass,
    })
}
