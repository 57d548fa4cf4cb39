//! The right quaternion module ℍⁿ: inner product, right multiplications,
//! and the subfield-linear span machinery.
//!
//! The inner product convention is `<x, y> = sum_k conj(y_k) * x_k`, so that
//! `<x*q, y> = <x, y>*q` and `<x, y*q> = conj(q)*<x, y>`. Projecting the
//! quaternion-valued product onto the subfield gives an F-Hermitian form
//! `<x, y>_F`, and all span/orthogonality computations below are taken with
//! respect to it. Spans are of the right-multiplication kind; closures are
//! the identity on finite spans.

use crate::error::{Error, Result};
use crate::quat::{FScalar, Frame, Quaternion};

/// An element of ℍⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct QVector {
    entries: Vec<Quaternion>,
}

impl QVector {
    pub fn new(entries: Vec<Quaternion>) -> Self {
        QVector { entries }
    }

    pub fn zeros(n: usize) -> Self {
        QVector {
            entries: vec![Quaternion::ZERO; n],
        }
    }

    /// Standard basis vector `e_c` (quaternion 1 in slot `c`).
    pub fn standard_basis(n: usize, c: usize) -> Self {
        let mut v = QVector::zeros(n);
        v.entries[c] = Quaternion::ONE;
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: usize) -> Quaternion {
        self.entries[idx]
    }

    pub fn set(&mut self, idx: usize, q: Quaternion) {
        self.entries[idx] = q;
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &Quaternion> {
        self.entries.iter()
    }

    pub fn add(&self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.len(), rhs.len());
        QVector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &QVector) -> QVector {
        debug_assert_eq!(self.len(), rhs.len());
        QVector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
        )
    }

    /// Entrywise right multiplication `R_q x = x*q`.
    pub fn right_mul(&self, q: Quaternion) -> QVector {
        QVector::new(self.entries.iter().map(|&e| e * q).collect())
    }

    /// Right multiplication by a subfield scalar.
    pub fn right_mul_f(&self, u: FScalar, frame: &Frame) -> QVector {
        self.right_mul(frame.embed_f(u))
    }

    pub fn scale(&self, s: f64) -> QVector {
        QVector::new(self.entries.iter().map(|&e| e.scale(s)).collect())
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.abs_sq()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    /// Euclidean distance in R⁴ⁿ.
    pub fn dist(&self, rhs: &QVector) -> f64 {
        self.sub(rhs).norm()
    }
}

/// `<x, y> = sum_k conj(y_k) * x_k`.
pub fn inner(x: &QVector, y: &QVector) -> Result<Quaternion> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mut acc = Quaternion::ZERO;
    for (xk, yk) in x.iter().zip(y.iter()) {
        acc = acc + yk.conj() * *xk;
    }
    Ok(acc)
}

/// Free-function form of [`QVector::right_mul`].
pub fn right_mul(x: &QVector, q: Quaternion) -> QVector {
    x.right_mul(q)
}

/// Projection of a quaternion onto the subfield along `F*phi`.
pub fn f_part(q: Quaternion, frame: &Frame) -> FScalar {
    frame.f_part(q)
}

/// The F-Hermitian inner product `<x, y>_F = f_part(<x, y>)`.
pub fn f_inner(x: &QVector, y: &QVector, frame: &Frame) -> Result<FScalar> {
    Ok(frame.f_part(inner(x, y)?))
}

/// A finite-dimensional F-subspace of ℍⁿ, held as an F-orthonormal basis.
#[derive(Clone, Debug)]
pub struct FSubspace {
    frame: Frame,
    ambient: usize,
    basis: Vec<QVector>,
}

impl FSubspace {
    pub fn empty(frame: Frame, ambient: usize) -> Self {
        FSubspace {
            frame,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Ambient dimension n of ℍⁿ.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// F-dimension of the subspace.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QVector] {
        &self.basis
    }

    /// F-orthogonal projection `sum_i b_i * <x, b_i>_F`.
    pub fn project(&self, x: &QVector) -> Result<QVector> {
        if !self.basis.is_empty() && x.len() != self.ambient {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: self.ambient,
            });
        }
        let mut acc = QVector::zeros(x.len());
        for b in &self.basis {
            let c = f_inner(x, b, &self.frame)?;
            acc = acc.add(&b.right_mul_f(c, &self.frame));
        }
        Ok(acc)
    }

    /// Norm of `x - project(x)`.
    pub fn residual(&self, x: &QVector) -> Result<f64> {
        Ok(x.sub(&self.project(x)?).norm())
    }

    /// Whether `x` lies in the subspace up to `tol * max(1, |x|)`.
    pub fn contains(&self, x: &QVector, tol: f64) -> Result<bool> {
        Ok(self.residual(x)? <= tol * 1.0_f64.max(x.norm()))
    }
}

/// Modified Gram-Schmidt over the subfield scalars.
///
/// Coefficients act by right multiplication only, so the output spans the
/// same right F-subspace as the input. Vectors whose residual after two
/// orthogonalization passes falls below `tol * max(1, largest input norm)`
/// are dropped.
pub fn f_orthonormalize(vectors: &[QVector], frame: &Frame, tol: f64) -> FSubspace {
    let ambient = vectors.first().map_or(0, QVector::len);
    let scale = vectors.iter().map(QVector::norm).fold(1.0_f64, f64::max);
    let mut basis: Vec<QVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = f_inner(&w, b, frame).expect("orthonormalize: equal lengths");
                w = w.sub(&b.right_mul_f(c, frame));
            }
        }
        let norm = w.norm();
        if norm > tol * scale {
            basis.push(w.scale(1.0 / norm));
        }
    }
    FSubspace {
        frame: *frame,
        ambient,
        basis,
    }
}

/// Free-function form of [`FSubspace::project`].
pub fn f_project(x: &QVector, subspace: &FSubspace) -> Result<QVector> {
    subspace.project(x)
}

/// Quaternionic rank of the right ℍ-span of `vectors`.
///
/// The ℍ-span of `{v}` equals the F-span of `{v, v*phi}`, so the rank is
/// half the F-rank of the doubled family (even in exact arithmetic).
pub fn h_rank(vectors: &[QVector], frame: &Frame, tol: f64) -> usize {
    let mut doubled = Vec::with_capacity(vectors.len() * 2);
    for v in vectors {
        doubled.push(v.clone());
        doubled.push(v.right_mul(frame.phi()));
    }
    let f_rank = f_orthonormalize(&doubled, frame, tol).rank();
    f_rank.div_ceil(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::DEFAULT_TOL;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    fn qv(entries: &[Quaternion]) -> QVector {
        QVector::new(entries.to_vec())
    }

    #[test]
    fn inner_basics() {
        let e1 = QVector::standard_basis(2, 0);
        assert_eq!(inner(&e1, &e1).unwrap(), Quaternion::ONE);
        // <(i), (j)> = conj(j)*i = -ji = k
        let x = qv(&[Quaternion::I]);
        let y = qv(&[Quaternion::J]);
        assert_eq!(inner(&x, &y).unwrap(), Quaternion::K);
        assert!(inner(&e1, &x).is_err());
    }

    #[test]
    fn right_mul_composition() {
        let x = qv(&[Quaternion::J]);
        // R_1 is the identity
        assert_eq!(x.right_mul(Quaternion::ONE), x);
        // (j)*i = ji = -k
        assert_eq!(x.right_mul(Quaternion::I).get(0), -Quaternion::K);
    }

    #[test]
    fn f_part_reads_frame_coordinates() {
        let fr = Frame::complex();
        assert_eq!(
            f_part(Quaternion::new(1.0, 2.0, 0.0, 0.0), &fr),
            FScalar::new(1.0, 2.0)
        );
        assert_eq!(f_part(fr.phi(), &fr), FScalar::ZERO);
        // 3 + f + 2*phi + 5*f*phi -> 3 + f
        let q = Quaternion::real(3.0) + fr.f() + fr.phi().scale(2.0) + fr.fphi().scale(5.0);
        assert_eq!(f_part(q, &fr), FScalar::new(3.0, 1.0));
    }

    #[test]
    fn orthonormalize_detects_f_rank() {
        let fr = Frame::complex();
        let e1 = QVector::standard_basis(2, 0);
        assert_eq!(
            f_orthonormalize(std::slice::from_ref(&e1), &fr, DEFAULT_TOL).rank(),
            1
        );
        // e1*i is an F-multiple of e1 when f = i
        let fam = [e1.clone(), e1.right_mul(Quaternion::I)];
        assert_eq!(f_orthonormalize(&fam, &fr, DEFAULT_TOL).rank(), 1);
        // e1*j is F-independent of e1
        let fam = [e1.clone(), e1.right_mul(Quaternion::J)];
        assert_eq!(f_orthonormalize(&fam, &fr, DEFAULT_TOL).rank(), 2);
    }

    #[test]
    fn projection_examples() {
        let fr = Frame::complex();
        let e1 = QVector::standard_basis(2, 0);
        let e2 = QVector::standard_basis(2, 1);
        let span = f_orthonormalize(std::slice::from_ref(&e1), &fr, DEFAULT_TOL);
        assert!(span.project(&e1).unwrap().dist(&e1) < TOL);
        assert!(span.project(&e2).unwrap().norm() < TOL);
        // <e1*j, e1>_F = f_part(j) = 0, so the projection vanishes
        let xj = e1.right_mul(Quaternion::J);
        assert!(span.project(&xj).unwrap().norm() < TOL);
    }

    #[test]
    fn h_rank_examples() {
        let fr = Frame::complex();
        let e1 = QVector::standard_basis(2, 0);
        let e2 = QVector::standard_basis(2, 1);
        assert_eq!(h_rank(std::slice::from_ref(&e1), &fr, DEFAULT_TOL), 1);
        assert_eq!(
            h_rank(&[e1.clone(), e1.right_mul(Quaternion::J)], &fr, DEFAULT_TOL),
            1
        );
        let v = e1.add(&e2.right_mul(Quaternion::K));
        assert_eq!(h_rank(&[v, e2], &fr, DEFAULT_TOL), 2);
    }

    fn arb_quat() -> impl Strategy<Value = Quaternion> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64)
            .prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
    }

    fn arb_qvec(n: usize) -> impl Strategy<Value = QVector> {
        prop::collection::vec(arb_quat(), n).prop_map(QVector::new)
    }

    fn arb_frame() -> impl Strategy<Value = Frame> {
        arb_quat().prop_filter_map("nonreal", |q| Frame::from_generator(q).ok())
    }

    proptest! {
        #[test]
        fn inner_is_sesquilinear(x in arb_qvec(3), y in arb_qvec(3), q in arb_quat()) {
            let lhs = inner(&x.right_mul(q), &y).unwrap();
            let rhs = inner(&x, &y).unwrap() * q;
            prop_assert!(lhs.approx_eq(rhs, TOL));
            let lhs = inner(&x, &y.right_mul(q)).unwrap();
            let rhs = q.conj() * inner(&x, &y).unwrap();
            prop_assert!(lhs.approx_eq(rhs, TOL));
            let sym = inner(&y, &x).unwrap();
            prop_assert!(sym.approx_eq(inner(&x, &y).unwrap().conj(), TOL));
            let selfprod = inner(&x, &x).unwrap();
            prop_assert!(selfprod.vector_part().abs() < TOL * (1.0 + x.norm_sq()));
            prop_assert!(selfprod.re() >= 0.0);
        }

        #[test]
        fn composition_law(x in arb_qvec(3), p in arb_quat(), q in arb_quat()) {
            // R_{pq} = R_q ∘ R_p
            let lhs = x.right_mul(p * q);
            let rhs = x.right_mul(p).right_mul(q);
            prop_assert!(lhs.dist(&rhs) <= TOL * (1.0 + lhs.norm()));
        }

        #[test]
        fn f_inner_matches_symplectic_coordinates(fr in arb_frame(), x in arb_qvec(3), y in arb_qvec(3)) {
            // with x = a + phi*b and y = c + phi*d componentwise,
            // <x, y>_F = sum conj(c_k) a_k + conj(d_k) b_k
            let mut expected = FScalar::ZERO;
            for k in 0..3 {
                let (a, b) = fr.coords(x.get(k));
                let (c, d) = fr.coords(y.get(k));
                expected = expected + c.conj() * a + d.conj() * b;
            }
            let got = f_inner(&x, &y, &fr).unwrap();
            prop_assert!((got - expected).abs() <= TOL * (1.0 + x.norm() * y.norm()));
        }

        #[test]
        fn projection_is_idempotent_and_orthogonal(fr in arb_frame(), vs in prop::collection::vec(arb_qvec(4), 1..5), x in arb_qvec(4)) {
            let span = f_orthonormalize(&vs, &fr, DEFAULT_TOL);
            let p = span.project(&x).unwrap();
            let pp = span.project(&p).unwrap();
            prop_assert!(p.dist(&pp) <= TOL * (1.0 + x.norm()));
            // residual is F-orthogonal to every basis vector
            let r = x.sub(&p);
            for b in span.basis() {
                prop_assert!(f_inner(&r, b, &fr).unwrap().abs() <= TOL * (1.0 + x.norm()));
            }
        }

        #[test]
        fn projection_is_f_selfadjoint(fr in arb_frame(), vs in prop::collection::vec(arb_qvec(4), 1..5), x in arb_qvec(4), y in arb_qvec(4)) {
            let span = f_orthonormalize(&vs, &fr, DEFAULT_TOL);
            let lhs = f_inner(&span.project(&x).unwrap(), &y, &fr).unwrap();
            let rhs = f_inner(&x, &span.project(&y).unwrap(), &fr).unwrap();
            prop_assert!((lhs - rhs).abs() <= TOL * (1.0 + x.norm() * y.norm()));
        }
    }
}
