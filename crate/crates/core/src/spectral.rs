//! Skew-selfadjoint quaternion matrices and their spectral pair `(E, J)`.
//!
//! A quaternion matrix acts on ℍⁿ by left multiplication of entries, hence
//! as a right-linear operator. Through the symplectic coordinates
//! `x = a + phi*b` the module becomes F²ⁿ and every matrix `A` with entries
//! `P + phi*Q` becomes the 2n x 2n block matrix `[[P, -conj(Q)], [Q, conj(P)]]`
//! over the subfield. For skew-selfadjoint `A` the matrix `(-f)*embed(A)` is
//! Hermitian over F; a cyclic Jacobi sweep diagonalizes it, eigenvalues come
//! in `±t` pairs, and grouping eigenprojections by `|t|` yields the atoms of
//! the spectral measure `E`, the subfield-linear measures `E_F(±t)`, and the
//! complex structure `J = R_f (E_F(f_+) - E_F(f_-))`.

use crate::error::{Error, Result};
use crate::hmod::{f_orthonormalize, FSubspace, QVector};
use crate::quat::{FScalar, Frame, Quaternion};

/// A dense n x n quaternion matrix, acting on [`QVector`] from the left.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    n: usize,
    data: Vec<Quaternion>,
}

impl QMatrix {
    pub fn zeros(n: usize) -> Self {
        QMatrix {
            n,
            data: vec![Quaternion::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMatrix::zeros(n);
        for idx in 0..n {
            m.set(idx, idx, Quaternion::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidFile(
                "matrix must be square and nonempty".into(),
            ));
        }
        let data: Vec<Quaternion> = rows.into_iter().flatten().collect();
        if data.iter().any(|q| !q.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(QMatrix { n, data })
    }

    pub fn diagonal(entries: &[Quaternion]) -> Self {
        let n = entries.len();
        let mut m = QMatrix::zeros(n);
        for (idx, &q) in entries.iter().enumerate() {
            m.set(idx, idx, q);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Quaternion {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, q: Quaternion) {
        self.data[r * self.n + c] = q;
    }

    pub fn column(&self, c: usize) -> QVector {
        QVector::new((0..self.n).map(|r| self.get(r, c)).collect())
    }

    pub fn matvec(&self, x: &QVector) -> QVector {
        debug_assert_eq!(x.len(), self.n);
        let mut out = QVector::zeros(self.n);
        for r in 0..self.n {
            let mut acc = Quaternion::ZERO;
            for c in 0..self.n {
                acc = acc + self.get(r, c) * x.get(c);
            }
            out.set(r, acc);
        }
        out
    }

    pub fn matmul(&self, rhs: &QMatrix) -> QMatrix {
        debug_assert_eq!(self.n, rhs.n);
        let mut out = QMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                let mut acc = Quaternion::ZERO;
                for m in 0..self.n {
                    acc = acc + self.get(r, m) * rhs.get(m, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn add(&self, rhs: &QMatrix) -> QMatrix {
        debug_assert_eq!(self.n, rhs.n);
        QMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &QMatrix) -> QMatrix {
        debug_assert_eq!(self.n, rhs.n);
        QMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        QMatrix {
            n: self.n,
            data: self.data.iter().map(|&a| a.scale(s)).collect(),
        }
    }

    /// Conjugate transpose; the adjoint for `<x, y> = sum conj(y_k) x_k`.
    pub fn adjoint(&self) -> QMatrix {
        let mut out = QMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(r, c, self.get(c, r).conj());
            }
        }
        out
    }

    /// Frobenius norm over R^(4n²).
    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|q| q.abs_sq()).sum::<f64>().sqrt()
    }

    /// `|A + A*| <= tol * max(1, |A|)` in the Frobenius norm.
    pub fn is_skew_selfadjoint(&self, tol: f64) -> bool {
        self.add(&self.adjoint()).frob_norm() <= tol * 1.0_f64.max(self.frob_norm())
    }

    /// Real part of the trace; equals the ℍ-rank for a selfadjoint idempotent.
    pub fn re_trace(&self) -> f64 {
        (0..self.n).map(|idx| self.get(idx, idx).re()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }
}

/// Free-function form of [`QMatrix::adjoint`].
pub fn adjoint(a: &QMatrix) -> QMatrix {
    a.adjoint()
}

/// Free-function form of [`QMatrix::is_skew_selfadjoint`].
pub fn is_skew_selfadjoint(a: &QMatrix, tol: f64) -> bool {
    a.is_skew_selfadjoint(tol)
}

/// A dense m x m matrix over the subfield of a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct FMatrix {
    m: usize,
    data: Vec<FScalar>,
}

impl FMatrix {
    pub fn zeros(m: usize) -> Self {
        FMatrix {
            m,
            data: vec![FScalar::ZERO; m * m],
        }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = FMatrix::zeros(m);
        for idx in 0..m {
            out.set(idx, idx, FScalar::ONE);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, r: usize, c: usize) -> FScalar {
        self.data[r * self.m + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FScalar) {
        self.data[r * self.m + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<FScalar> {
        (0..self.m).map(|r| self.get(r, c)).collect()
    }

    pub fn matvec(&self, x: &[FScalar]) -> Vec<FScalar> {
        debug_assert_eq!(x.len(), self.m);
        (0..self.m)
            .map(|r| {
                let mut acc = FScalar::ZERO;
                for (c, &xc) in x.iter().enumerate() {
                    acc = acc + self.get(r, c) * xc;
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, rhs: &FMatrix) -> FMatrix {
        debug_assert_eq!(self.m, rhs.m);
        let mut out = FMatrix::zeros(self.m);
        for r in 0..self.m {
            for c in 0..self.m {
                let mut acc = FScalar::ZERO;
                for k in 0..self.m {
                    acc = acc + self.get(r, k) * rhs.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn add(&self, rhs: &FMatrix) -> FMatrix {
        debug_assert_eq!(self.m, rhs.m);
        FMatrix {
            m: self.m,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &FMatrix) -> FMatrix {
        debug_assert_eq!(self.m, rhs.m);
        FMatrix {
            m: self.m,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: FScalar) -> FMatrix {
        FMatrix {
            m: self.m,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    /// Conjugate transpose over the subfield.
    pub fn adjoint(&self) -> FMatrix {
        let mut out = FMatrix::zeros(self.m);
        for r in 0..self.m {
            for c in 0..self.m {
                out.set(r, c, self.get(c, r).conj());
            }
        }
        out
    }

    /// `(M + M*)/2`; exactly Hermitian entrywise.
    pub fn hermitian_part(&self) -> FMatrix {
        let mut out = FMatrix::zeros(self.m);
        for r in 0..self.m {
            for c in 0..self.m {
                out.set(r, c, (self.get(r, c) + self.get(c, r).conj()) * 0.5);
            }
        }
        out
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v.abs_sq()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.sub(&self.adjoint()).frob_norm() <= tol * 1.0_f64.max(self.frob_norm())
    }
}

/// Stacked symplectic coordinates `[a; b]` of `x = a + phi*b` (length 2n).
pub fn split_stacked(x: &QVector, frame: &Frame) -> Vec<FScalar> {
    let n = x.len();
    let mut out = vec![FScalar::ZERO; 2 * n];
    for k in 0..n {
        let (a, b) = frame.coords(x.get(k));
        out[k] = a;
        out[n + k] = b;
    }
    out
}

/// Inverse of [`split_stacked`].
pub fn recompose_stacked(coords: &[FScalar], frame: &Frame) -> QVector {
    let n = coords.len() / 2;
    debug_assert_eq!(coords.len(), 2 * n);
    QVector::new(
        (0..n)
            .map(|k| frame.from_coords(coords[k], coords[n + k]))
            .collect(),
    )
}

/// The 2n x 2n subfield matrix of `A` on symplectic coordinates.
///
/// Writing every entry `A_rc = P + phi*Q` with `P, Q` in the subfield, the
/// blocks are `[[P, -conj(Q)], [Q, conj(P)]]`. The map is an algebra
/// homomorphism, and skew-selfadjoint `A` embed to skew-Hermitian matrices.
pub fn embed(a: &QMatrix, frame: &Frame) -> FMatrix {
    let n = a.dim();
    let mut m = FMatrix::zeros(2 * n);
    for r in 0..n {
        for c in 0..n {
            let (p, q) = frame.coords(a.get(r, c));
            m.set(r, c, p);
            m.set(r, n + c, -q.conj());
            m.set(n + r, c, q);
            m.set(n + r, n + c, p.conj());
        }
    }
    m
}

/// Reads a 2n x 2n subfield matrix back as a quaternion matrix.
///
/// Faithful exactly when the matrix commutes with the right ℍ-action, i.e.
/// when it is the embedding of some quaternion matrix.
pub fn unembed(m: &FMatrix, frame: &Frame) -> QMatrix {
    let n = m.dim() / 2;
    debug_assert_eq!(m.dim(), 2 * n);
    let mut a = QMatrix::zeros(n);
    for c in 0..n {
        let col = apply_f(m, &QVector::standard_basis(n, c), frame);
        for r in 0..n {
            a.set(r, c, col.get(r));
        }
    }
    a
}

/// Applies a 2n x 2n subfield matrix to ℍⁿ through symplectic coordinates.
pub fn apply_f(m: &FMatrix, x: &QVector, frame: &Frame) -> QVector {
    debug_assert_eq!(m.dim(), 2 * x.len());
    recompose_stacked(&m.matvec(&split_stacked(x, frame)), frame)
}

/// Eigenvalues (ascending) and F-orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: FMatrix,
}

/// Cyclic Jacobi diagonalization of a Hermitian subfield matrix.
///
/// Rotations run in fixed row-major order; sweeps stop once the off-diagonal
/// Frobenius mass drops below `tol * |M|` (at most 100 sweeps). Each rotation
/// is a phase followed by a real Givens rotation on the `(p, q)` plane.
pub fn hermitian_eigen(m: &FMatrix, tol: f64) -> Result<HermitianEigen> {
    let dim = m.dim();
    let scale = m.frob_norm();
    let defect = m.sub(&m.adjoint()).frob_norm();
    if defect > tol * scale.max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let mut a = m.hermitian_part();
    let mut v = FMatrix::identity(dim);

    let off = |a: &FMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..dim {
            for q in 0..dim {
                if p != q {
                    s += a.get(p, q).abs_sq();
                }
            }
        }
        s.sqrt()
    };

    let thresh = tol * scale;
    let mut sweeps = 0;
    while off(&a) > thresh && sweeps < 100 {
        for p in 0..dim.saturating_sub(1) {
            for q in (p + 1)..dim {
                let apq = a.get(p, q);
                let r = apq.abs();
                if r == 0.0 {
                    continue;
                }
                let app = a.get(p, p).a;
                let aqq = a.get(q, q).a;
                let u = apq * (1.0 / r);
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let uc = u * c;
                let us = u * s;
                for j in 0..dim {
                    if j == p || j == q {
                        continue;
                    }
                    let mjp = a.get(j, p);
                    let mjq = a.get(j, q);
                    let njp = mjp * uc - mjq * s;
                    let njq = mjp * us + mjq * c;
                    a.set(j, p, njp);
                    a.set(j, q, njq);
                    a.set(p, j, njp.conj());
                    a.set(q, j, njq.conj());
                }
                a.set(p, p, FScalar::real(app - t * r));
                a.set(q, q, FScalar::real(aqq + t * r));
                a.set(p, q, FScalar::ZERO);
                a.set(q, p, FScalar::ZERO);
                for j in 0..dim {
                    let vjp = v.get(j, p);
                    let vjq = v.get(j, q);
                    v.set(j, p, vjp * uc - vjq * s);
                    v.set(j, q, vjp * us + vjq * c);
                }
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| {
        a.get(x, x)
            .a
            .partial_cmp(&a.get(y, y).a)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.cmp(&y))
    });
    let values: Vec<f64> = order.iter().map(|&idx| a.get(idx, idx).a).collect();
    let mut vectors = FMatrix::zeros(dim);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..dim {
            vectors.set(r, new_c, v.get(r, old_c));
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// The operator `J = R_f (E_F(f_+) - E_F(f_-))`.
///
/// `J` commutes with the spectral measure and squares to `-I`. It is
/// ℍ-linear exactly when `A` has trivial kernel; on `ker A` it acts as the
/// right multiplication `R_f`, which is only F-linear, so the operator is
/// kept as the pair (frame, difference matrix) rather than a quaternion
/// matrix.
#[derive(Clone, Debug)]
pub struct ComplexStructure {
    frame: Frame,
    diff: FMatrix,
}

impl ComplexStructure {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// The subfield matrix `E_F(f_+) - E_F(f_-)` on symplectic coordinates.
    pub fn difference(&self) -> &FMatrix {
        &self.diff
    }

    /// `J x = (E_F(f_+) - E_F(f_-)) x * f`.
    pub fn apply(&self, x: &QVector) -> QVector {
        apply_f(&self.diff, x, &self.frame).right_mul(self.frame.f())
    }

    /// Standard-basis action as a quaternion matrix.
    ///
    /// A faithful representation of `J` when `A` is invertible; on a kernel
    /// it only records the columns `J e_c`.
    pub fn to_qmatrix(&self) -> QMatrix {
        let n = self.diff.dim() / 2;
        let mut m = QMatrix::zeros(n);
        for c in 0..n {
            let col = self.apply(&QVector::standard_basis(n, c));
            for r in 0..n {
                m.set(r, c, col.get(r));
            }
        }
        m
    }
}

/// One spectral atom `t >= 0` with its projections.
#[derive(Clone, Debug)]
struct Atom {
    t: f64,
    h_rank: usize,
    /// ℍ-linear projection onto the atom's eigenspace.
    e: QMatrix,
    /// `E_F({+t})` for `t > 0`; `E_F({0})` for the zero atom.
    ef_plus: FMatrix,
    /// `E_F({-t})` for `t > 0`; zero for the zero atom.
    ef_minus: FMatrix,
}

/// The spectral pair of a skew-selfadjoint quaternion matrix.
///
/// Atoms are ascending, with a possible zero atom first. Each nonzero atom
/// `t` carries the subfield projections at `+t f` and `-t f` and the
/// ℍ-linear projection `E({t f})`; the zero atom carries `E_F({0})`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    frame: Frame,
    n: usize,
    atoms: Vec<Atom>,
    j: ComplexStructure,
    eigenvalues: Vec<f64>,
}

impl SpectralData {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Dimension of the underlying module ℍⁿ.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Atom value `t_k` (the atom sits at `t_k * f` on the half-axis).
    pub fn atom(&self, k: usize) -> f64 {
        self.atoms[k].t
    }

    pub fn atom_values(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.t).collect()
    }

    /// ℍ-multiplicity of atom `k`.
    pub fn h_rank(&self, k: usize) -> usize {
        self.atoms[k].h_rank
    }

    pub fn h_ranks(&self) -> Vec<usize> {
        self.atoms.iter().map(|a| a.h_rank).collect()
    }

    /// The ℍ-linear projection `E` at atom `k`.
    pub fn e(&self, k: usize) -> &QMatrix {
        &self.atoms[k].e
    }

    /// `E_F({+t_k f})` for a nonzero atom.
    pub fn ef_pos(&self, k: usize) -> Option<&FMatrix> {
        (self.atoms[k].t > 0.0).then_some(&self.atoms[k].ef_plus)
    }

    /// `E_F({-t_k f})` for a nonzero atom.
    pub fn ef_neg(&self, k: usize) -> Option<&FMatrix> {
        (self.atoms[k].t > 0.0).then_some(&self.atoms[k].ef_minus)
    }

    /// `E_F({0})`, present when the matrix has a kernel.
    pub fn ef_zero(&self) -> Option<&FMatrix> {
        self.atoms
            .first()
            .filter(|a| a.t == 0.0)
            .map(|a| &a.ef_plus)
    }

    pub fn has_zero_atom(&self) -> bool {
        self.atoms.first().is_some_and(|a| a.t == 0.0)
    }

    /// The nonnegative-side subfield projection of atom `k`
    /// (`E_F({+t})`, or `E_F({0})` for the zero atom).
    pub fn ef_plus_at(&self, k: usize) -> &FMatrix {
        &self.atoms[k].ef_plus
    }

    pub fn ef_minus_at(&self, k: usize) -> &FMatrix {
        &self.atoms[k].ef_minus
    }

    /// `E_F(f_+) = E_F({0}) + sum_k E_F({+t_k})` (the half-axis includes 0).
    pub fn ef_f_plus(&self) -> FMatrix {
        let mut acc = FMatrix::zeros(2 * self.n);
        for atom in &self.atoms {
            acc = acc.add(&atom.ef_plus);
        }
        acc
    }

    /// `E_F(f_-) = sum_k E_F({-t_k})`.
    pub fn ef_f_minus(&self) -> FMatrix {
        let mut acc = FMatrix::zeros(2 * self.n);
        for atom in &self.atoms {
            acc = acc.add(&atom.ef_minus);
        }
        acc
    }

    pub fn apply_ef_plus(&self, x: &QVector) -> QVector {
        apply_f(&self.ef_f_plus(), x, &self.frame)
    }

    pub fn apply_ef_minus(&self, x: &QVector) -> QVector {
        apply_f(&self.ef_f_minus(), x, &self.frame)
    }

    /// Interval measure `E(alpha)` for a set of atom indices.
    pub fn e_of(&self, atom_indices: &[usize]) -> QMatrix {
        let mut acc = QMatrix::zeros(self.n);
        for &k in atom_indices {
            acc = acc.add(&self.atoms[k].e);
        }
        acc
    }

    pub fn j(&self) -> &ComplexStructure {
        &self.j
    }

    /// Eigenvalues of `(-f)*embed(A)`, ascending; symmetric about zero.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// An F-orthonormal basis of `H+ = E_F(f_+) H`.
    pub fn h_plus_subspace(&self, tol: f64) -> FSubspace {
        let plus = self.ef_f_plus();
        let cols: Vec<QVector> = (0..2 * self.n)
            .map(|c| recompose_stacked(&plus.column(c), &self.frame))
            .collect();
        f_orthonormalize(&cols, &self.frame, tol)
    }

    /// Reassembles the operator: `A = sum_k t_k * J * E_k`.
    pub fn reconstruct(&self) -> QMatrix {
        let mut acc = QMatrix::zeros(self.n);
        for atom in &self.atoms {
            if atom.t == 0.0 {
                continue;
            }
            for c in 0..self.n {
                let col = self.j.apply(&atom.e.column(c)).scale(atom.t);
                for r in 0..self.n {
                    acc.set(r, c, acc.get(r, c) + col.get(r));
                }
            }
        }
        acc
    }
}

/// Free-function form of [`SpectralData::reconstruct`].
pub fn reconstruct(sd: &SpectralData) -> QMatrix {
    sd.reconstruct()
}

fn projection_from_columns(vectors: &FMatrix, cols: &[usize]) -> FMatrix {
    let dim = vectors.dim();
    let mut p = FMatrix::zeros(dim);
    for &k in cols {
        for r in 0..dim {
            let vr = vectors.get(r, k);
            for c in 0..dim {
                let old = p.get(r, c);
                p.set(r, c, old + vr * vectors.get(c, k).conj());
            }
        }
    }
    p
}

fn pullback_qmatrix(m: &FMatrix, frame: &Frame, n: usize) -> QMatrix {
    let mut out = QMatrix::zeros(n);
    for c in 0..n {
        let col = apply_f(m, &QVector::standard_basis(n, c), frame);
        for r in 0..n {
            out.set(r, c, col.get(r));
        }
    }
    out
}

/// Spectral decomposition of a skew-selfadjoint quaternion matrix.
///
/// Eigenvalues of `(-f)*embed(A)` within `cluster_tol * max(1, |A|)` of zero
/// collapse to the zero atom; the rest are folded by absolute value and
/// greedily merged by the same gap threshold, each cluster becoming one atom
/// whose value is the mean of its eigenvalue magnitudes.
pub fn spectral_data(a: &QMatrix, frame: &Frame, cluster_tol: f64) -> Result<SpectralData> {
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim();
    let scale = 1.0_f64.max(a.frob_norm());
    let defect = a.add(&a.adjoint()).frob_norm();
    if defect > cluster_tol * scale {
        return Err(Error::NotSkewSelfadjoint { defect });
    }

    let hermitian = embed(a, frame)
        .scale(FScalar::new(0.0, -1.0))
        .hermitian_part();
    let eig = hermitian_eigen(&hermitian, cluster_tol.min(1e-13))?;

    let thr = cluster_tol * scale;
    let mut zero_members: Vec<usize> = Vec::new();
    let mut folded: Vec<(f64, usize)> = Vec::new();
    for (idx, &val) in eig.values.iter().enumerate() {
        if val.abs() < thr {
            zero_members.push(idx);
        } else {
            folded.push((val.abs(), idx));
        }
    }
    folded.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
    let mut clusters: Vec<Vec<(f64, usize)>> = Vec::new();
    for item in folded {
        match clusters.last_mut() {
            Some(cluster) if item.0 - cluster.last().unwrap().0 < thr => cluster.push(item),
            _ => clusters.push(vec![item]),
        }
    }

    let mut atoms = Vec::new();
    if !zero_members.is_empty() {
        let ef_zero = projection_from_columns(&eig.vectors, &zero_members);
        atoms.push(Atom {
            t: 0.0,
            h_rank: zero_members.len().div_ceil(2),
            e: pullback_qmatrix(&ef_zero, frame, n),
            ef_plus: ef_zero,
            ef_minus: FMatrix::zeros(2 * n),
        });
    }
    for cluster in clusters {
        let t = cluster.iter().map(|&(mag, _)| mag).sum::<f64>() / cluster.len() as f64;
        let pos: Vec<usize> = cluster
            .iter()
            .filter(|&&(_, idx)| eig.values[idx] > 0.0)
            .map(|&(_, idx)| idx)
            .collect();
        let neg: Vec<usize> = cluster
            .iter()
            .filter(|&&(_, idx)| eig.values[idx] < 0.0)
            .map(|&(_, idx)| idx)
            .collect();
        let ef_plus = projection_from_columns(&eig.vectors, &pos);
        let ef_minus = projection_from_columns(&eig.vectors, &neg);
        atoms.push(Atom {
            t,
            h_rank: cluster.len().div_ceil(2),
            e: pullback_qmatrix(&ef_plus.add(&ef_minus), frame, n),
            ef_plus,
            ef_minus,
        });
    }

    let mut diff = FMatrix::zeros(2 * n);
    for atom in &atoms {
        diff = diff.add(&atom.ef_plus).sub(&atom.ef_minus);
    }
    let j = ComplexStructure {
        frame: *frame,
        diff,
    };

    Ok(SpectralData {
        frame: *frame,
        n,
        atoms,
        j,
        eigenvalues: eig.values,
    })
}
