//! Named residual suites for the spectral pair, the span calculus, the
//! generating vector, and the model transport.
//!
//! Conventions: residuals are small-is-good and, unless noted, relative to
//! `max(1, |A|)`. Identities that involve maps which are only real-linear
//! (right multiplications, the one-sided measures, `J` over a kernel) are
//! evaluated on the 4n x 4n real representation; everything else stays in
//! quaternion-matrix algebra.

use rand::Rng;

use crate::error::Result;
use crate::genvec::{
    cyclic_span_f, has_simple_spectrum, special_generating_vector, GeneratingVector,
};
use crate::hmod::{f_inner, f_orthonormalize, FSubspace, QVector};
use crate::model::{build_model, verify_equivalence};
use crate::quat::{FScalar, Frame, Quaternion};
use crate::realop::{rmatrix_of, rmatrix_of_fmatrix, rmatrix_of_right_mul, RMatrix};
use crate::spectral::{spectral_data, QMatrix, SpectralData};
use crate::synth::{random_qvector, rng_for_seed};

/// Residual suite for the operator identities of a decomposition.
pub fn decomposition_residuals(a: &QMatrix, sd: &SpectralData) -> Vec<(String, f64)> {
    let n = sd.n();
    let frame = sd.frame();
    let scale = 1.0_f64.max(a.frob_norm());
    let natoms = sd.num_atoms();
    let mut out: Vec<(String, f64)> = Vec::new();

    out.push((
        "skew_selfadjoint".into(),
        a.add(&a.adjoint()).frob_norm() / scale,
    ));

    // measure axioms on the stored H-linear projections
    let mut idem = 0.0_f64;
    let mut selfadj = 0.0_f64;
    let mut ortho = 0.0_f64;
    let mut sum = QMatrix::zeros(n);
    for k in 0..natoms {
        let e = sd.e(k);
        idem = idem.max(e.matmul(e).sub(e).frob_norm());
        selfadj = selfadj.max(e.adjoint().sub(e).frob_norm());
        for l in 0..natoms {
            if l != k {
                ortho = ortho.max(e.matmul(sd.e(l)).frob_norm());
            }
        }
        sum = sum.add(e);
    }
    out.push(("e_idempotent".into(), idem / scale));
    out.push(("e_selfadjoint".into(), selfadj / scale));
    out.push(("e_mutually_orthogonal".into(), ortho / scale));
    out.push((
        "e_sum_identity".into(),
        sum.sub(&QMatrix::identity(n)).frob_norm() / scale,
    ));

    // H-linearity of the measure and all J identities, on the real
    // representation (the pullbacks are a priori only real-linear)
    let right_units: Vec<RMatrix> = [Quaternion::I, Quaternion::J, Quaternion::K]
        .iter()
        .map(|&q| rmatrix_of_right_mul(q, n, frame))
        .collect();
    let r_phi = rmatrix_of_right_mul(frame.phi(), n, frame);
    let re_j = rmatrix_of(n, frame, |x| sd.j().apply(x));
    let mut h_linear = 0.0_f64;
    let mut j_comm = 0.0_f64;
    let mut one_sided = 0.0_f64;
    for k in 0..natoms {
        let ef_full = sd.ef_plus_at(k).add(sd.ef_minus_at(k));
        let re_e = rmatrix_of_fmatrix(&ef_full, frame);
        for rq in &right_units {
            h_linear = h_linear.max(re_e.matmul(rq).sub(&rq.matmul(&re_e)).quat_norm());
        }
        j_comm = j_comm.max(re_j.matmul(&re_e).sub(&re_e.matmul(&re_j)).quat_norm());
        if sd.atom(k) > 0.0 {
            let re_pos = rmatrix_of_fmatrix(sd.ef_plus_at(k), frame);
            let re_neg = rmatrix_of_fmatrix(sd.ef_minus_at(k), frame);
            one_sided = one_sided.max(
                re_pos
                    .matmul(&r_phi)
                    .sub(&r_phi.matmul(&re_neg))
                    .quat_norm(),
            );
        }
    }
    out.push(("e_h_linear".into(), h_linear / scale));
    out.push(("j_commutes_measure".into(), j_comm / scale));
    // absolute: the one-sided measures are unit-scale projections
    out.push(("one_sided_commutation".into(), one_sided));

    let dim = 4 * n;
    out.push((
        "j_square".into(),
        re_j.matmul(&re_j).add(&RMatrix::identity(dim)).quat_norm() / scale,
    ));
    out.push((
        "j_skew".into(),
        re_j.add(&re_j.transpose()).quat_norm() / scale,
    ));

    // the eigenvalue multiset of the embedding is symmetric about zero
    let vals = sd.eigenvalues();
    let m2 = vals.len();
    let symmetry = (0..m2)
        .map(|idx| (vals[idx] + vals[m2 - 1 - idx]).abs())
        .fold(0.0_f64, f64::max);
    out.push(("spectral_symmetry".into(), symmetry / scale));

    out.push((
        "reconstruction".into(),
        sd.reconstruct().sub(a).frob_norm() / scale,
    ));

    out
}

/// Residuals for the decomposition `H = H+ (+)_F R_phi H+`.
///
/// Only meaningful for invertible operators: the kernel lies in both
/// summands, so the list is empty when a zero atom is present.
pub fn h_plus_decomposition_residuals(sd: &SpectralData, tol: f64) -> Vec<(String, f64)> {
    if sd.has_zero_atom() {
        return Vec::new();
    }
    let frame = sd.frame();
    let h_plus = sd.h_plus_subspace(tol);
    let phi_basis: Vec<QVector> = h_plus
        .basis()
        .iter()
        .map(|b| b.right_mul(frame.phi()))
        .collect();
    let mut family: Vec<QVector> = h_plus.basis().to_vec();
    family.extend(phi_basis.iter().cloned());
    let combined = f_orthonormalize(&family, frame, tol);
    let rank_defect = (2 * sd.n()) as f64 - combined.rank() as f64;
    let mut cross = 0.0_f64;
    for x in h_plus.basis() {
        for y in &phi_basis {
            cross = cross.max(f_inner(x, y, frame).expect("equal lengths").abs());
        }
    }
    vec![
        ("h_plus_rank_defect".into(), rank_defect),
        ("h_plus_cross_orthogonality".into(), cross),
    ]
}

fn contains_residual(span: &FSubspace, vectors: &[QVector]) -> f64 {
    vectors
        .iter()
        .map(|v| span.residual(v).expect("equal lengths") / 1.0_f64.max(v.norm()))
        .fold(0.0_f64, f64::max)
}

fn equality_residual(s1: &FSubspace, s2: &FSubspace) -> f64 {
    if s1.rank() != s2.rank() {
        return 1.0;
    }
    contains_residual(s1, s2.basis()).max(contains_residual(s2, s1.basis()))
}

/// F-basis of the ℍ-span of the cyclic family `{E_k g}`.
fn h_cyclic_span(sd: &SpectralData, g: &QVector, tol: f64) -> FSubspace {
    let frame = sd.frame();
    let mut family = Vec::with_capacity(2 * sd.num_atoms());
    for k in 0..sd.num_atoms() {
        let img = sd.e(k).matvec(g);
        family.push(img.clone());
        family.push(img.right_mul(frame.phi()));
    }
    f_orthonormalize(&family, frame, tol)
}

/// F-span of the plain cyclic family `{E_k g}` (ℍ-linear measures).
fn f_span_of_e_images(sd: &SpectralData, g: &QVector, tol: f64) -> FSubspace {
    let family: Vec<QVector> = (0..sd.num_atoms()).map(|k| sd.e(k).matvec(g)).collect();
    f_orthonormalize(&family, sd.frame(), tol)
}

fn union_span(s1: &FSubspace, s2: &FSubspace, frame: &Frame, tol: f64) -> FSubspace {
    let mut family = s1.basis().to_vec();
    family.extend(s2.basis().iter().cloned());
    f_orthonormalize(&family, frame, tol)
}

/// Span-calculus identities for the cyclic spans of the spectral measures,
/// probed on seeded random vectors.
pub fn span_calculus_residuals(
    sd: &SpectralData,
    rng: &mut impl Rng,
    tol: f64,
) -> Vec<(String, f64)> {
    let n = sd.n();
    let frame = sd.frame();
    let natoms = sd.num_atoms();
    let mut out: Vec<(String, f64)> = Vec::new();

    let g1 = random_qvector(rng, n);
    let g2 = random_qvector(rng, n);
    let g = random_qvector(rng, n);

    // C_F(E_F, g1+g2) is inside C_F(E_F, g1) + C_F(E_F, g2)
    let c1 = cyclic_span_f(sd, &g1, tol);
    let c2 = cyclic_span_f(sd, &g2, tol);
    let c12 = cyclic_span_f(sd, &g1.add(&g2), tol);
    let union = union_span(&c1, &c2, frame, tol);
    out.push((
        "span_sum_inclusion".into(),
        contains_residual(&union, c12.basis()),
    ));

    // C(E, g) = C_F(E, g) + R_phi C_F(E, g) as F-spaces
    let lhs = h_cyclic_span(sd, &g, tol);
    let cf_e = f_span_of_e_images(sd, &g, tol);
    let phi_part = f_orthonormalize(
        &cf_e
            .basis()
            .iter()
            .map(|b| b.right_mul(frame.phi()))
            .collect::<Vec<_>>(),
        frame,
        tol,
    );
    let rhs = union_span(&cf_e, &phi_part, frame, tol);
    out.push(("span_h_split".into(), equality_residual(&lhs, &rhs)));

    // h in C_F(g) implies C_F(h) inside C_F(g)
    let cg = cyclic_span_f(sd, &g, tol);
    if cg.rank() > 0 {
        let mut h = QVector::zeros(n);
        for b in cg.basis() {
            let u = FScalar::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h = h.add(&b.right_mul_f(u, frame));
        }
        let ch = cyclic_span_f(sd, &h, tol);
        out.push(("span_nested".into(), contains_residual(&cg, ch.basis())));
    }

    // C_F(E_F, g) is inside H+
    let h_plus = sd.h_plus_subspace(tol);
    out.push((
        "span_in_h_plus".into(),
        contains_residual(&h_plus, cg.basis()),
    ));

    // for g+ in H+, the F-span of {E_k g+} equals C_F(E_F, g+)
    let g_plus = sd.apply_ef_plus(&g);
    let s1 = f_span_of_e_images(sd, &g_plus, tol);
    let s2 = cyclic_span_f(sd, &g_plus, tol);
    out.push(("span_h_plus_agreement".into(), equality_residual(&s1, &s2)));

    // C(E, R_phi g) = R_phi C(E, g)
    let lhs = h_cyclic_span(sd, &g.right_mul(frame.phi()), tol);
    let rhs = f_orthonormalize(
        &h_cyclic_span(sd, &g, tol)
            .basis()
            .iter()
            .map(|b| b.right_mul(frame.phi()))
            .collect::<Vec<_>>(),
        frame,
        tol,
    );
    out.push(("span_phi_shift".into(), equality_residual(&lhs, &rhs)));

    // orthogonal cyclic sums split: tested on atom-disjoint vectors, where
    // the hypothesis h (F-orthogonal to) C_F(E_F, g) holds by construction
    if natoms >= 2 {
        let mut mask: Vec<bool> = (0..natoms).map(|_| rng.random_bool(0.5)).collect();
        if mask.iter().all(|&b| b) {
            mask[0] = false;
        }
        if mask.iter().all(|&b| !b) {
            mask[0] = true;
        }
        let x1 = random_qvector(rng, n);
        let x2 = random_qvector(rng, n);
        let mut gs = QVector::zeros(n);
        let mut hs = QVector::zeros(n);
        for (k, &in_s) in mask.iter().enumerate() {
            if in_s {
                gs = gs.add(&sd.e(k).matvec(&x1));
            } else {
                hs = hs.add(&sd.e(k).matvec(&x2));
            }
        }
        out.extend(orthogonal_sum_residuals(
            sd,
            &gs,
            &hs,
            "span_orthogonal_sum",
            tol,
        ));

        // generic variant: h is the orthogonal complement of a random vector
        // relative to C_F(E_F, g); valid when every one-sided projection has
        // F-rank one, i.e. for simple spectra without a kernel
        if has_simple_spectrum(sd, tol) && !sd.has_zero_atom() {
            let cgs = cyclic_span_f(sd, &gs, tol);
            let x3 = random_qvector(rng, n);
            let hg = x3.sub(&cgs.project(&x3).expect("equal lengths"));
            out.extend(orthogonal_sum_residuals(
                sd,
                &gs,
                &hg,
                "span_orthogonal_sum_generic",
                tol,
            ));
        }
    }

    out
}

fn orthogonal_sum_residuals(
    sd: &SpectralData,
    g: &QVector,
    h: &QVector,
    prefix: &str,
    tol: f64,
) -> Vec<(String, f64)> {
    let frame = sd.frame();
    let cg = cyclic_span_f(sd, g, tol);
    let ch = cyclic_span_f(sd, h, tol);
    let csum = cyclic_span_f(sd, &g.add(h), tol);
    let mut cross = 0.0_f64;
    for bg in cg.basis() {
        for bh in ch.basis() {
            cross = cross.max(f_inner(bg, bh, frame).expect("equal lengths").abs());
        }
    }
    let additivity = if csum.rank() == cg.rank() + ch.rank() {
        0.0
    } else {
        1.0
    };
    let union = union_span(&cg, &ch, frame, tol);
    let equality = contains_residual(&union, csum.basis());
    vec![
        (format!("{prefix}_cross_orthogonality"), cross),
        (format!("{prefix}_rank_additivity"), additivity),
        (format!("{prefix}_span_equality"), equality),
    ]
}

/// Certificate residuals of a constructed generating vector.
pub fn generating_residuals(
    sd: &SpectralData,
    gv: &GeneratingVector,
    tol: f64,
) -> Vec<(String, f64)> {
    vec![
        ("genvec_j_residual".into(), gv.certificate.j_residual),
        (
            "genvec_rank_defect".into(),
            sd.n() as f64 - gv.certificate.cyclic_rank as f64,
        ),
        (
            "genvec_weight_defect".into(),
            (tol - gv.certificate.min_weight).max(0.0),
        ),
    ]
}

/// Everything `verify` reports for one matrix.
#[derive(Clone, Debug)]
pub struct VerificationOutcome {
    pub atoms: Vec<f64>,
    pub h_ranks: Vec<usize>,
    pub simple: bool,
    pub weights: Option<Vec<f64>>,
    /// Standard-basis action of `J` (columns `J e_c`).
    pub j_action: Option<QMatrix>,
    pub residuals: Vec<(String, f64)>,
    pub pass: bool,
}

impl VerificationOutcome {
    fn failed_skew(defect: f64) -> Self {
        VerificationOutcome {
            atoms: Vec::new(),
            h_ranks: Vec::new(),
            simple: false,
            weights: None,
            j_action: None,
            residuals: vec![("skew_selfadjoint".into(), defect)],
            pass: false,
        }
    }
}

/// Runs the full invariant suite on one matrix.
///
/// A matrix that is not skew-selfadjoint is reported (named residual
/// `skew_selfadjoint`, `pass = false`) rather than rejected. The span
/// calculus is probed on vectors drawn from `seed`. `pass` is true exactly
/// when every residual is at most `tol`.
pub fn full_verification(
    a: &QMatrix,
    frame: &Frame,
    tol: f64,
    seed: u64,
) -> Result<VerificationOutcome> {
    let scale = 1.0_f64.max(a.frob_norm());
    let skew_defect = a.add(&a.adjoint()).frob_norm() / scale;
    if skew_defect > tol {
        return Ok(VerificationOutcome::failed_skew(skew_defect));
    }
    let sd = spectral_data(a, frame, tol)?;
    let mut residuals = decomposition_residuals(a, &sd);
    residuals.extend(h_plus_decomposition_residuals(&sd, tol));
    let mut rng = rng_for_seed(seed);
    residuals.extend(span_calculus_residuals(&sd, &mut rng, tol));

    let simple = has_simple_spectrum(&sd, tol);
    let mut weights = None;
    if simple {
        match special_generating_vector(&sd, tol) {
            Ok(gv) => {
                residuals.extend(generating_residuals(&sd, &gv, tol));
                let model = build_model(&sd, &gv, tol)?;
                weights = Some(model.measure().weights().to_vec());
                let report = verify_equivalence(a, &sd, &model, tol)?;
                for (name, value) in report.residuals() {
                    residuals.push((name.into(), value));
                }
            }
            Err(err) => {
                residuals.push((format!("genvec_construction ({err})"), 1.0));
            }
        }
    }

    let pass = residuals.iter().all(|&(_, v)| v <= tol);
    Ok(VerificationOutcome {
        atoms: sd.atom_values(),
        h_ranks: sd.h_ranks(),
        simple,
        weights,
        j_action: Some(sd.j().to_qmatrix()),
        residuals,
        pass,
    })
}
