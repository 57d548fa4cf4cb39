//! Quaternion arithmetic, subfield frames, and symplectic coordinates.
//!
//! A quaternion is stored by its real coordinates in the basis `{1, i, j, k}`
//! with `i² = j² = k² = -1`, `ij = k`, `jk = i`, `ki = j`. Any imaginary unit
//! `f` generates a commutative subfield `F = R<1, f>` isomorphic to the
//! complex plane; picking a unit `phi` orthogonal to `span{1, f}` completes
//! `{1, f, phi, f*phi}` to an orthonormal R-basis of the quaternions. Every
//! `q` then splits as `q = u1 + u2*phi` with `u1, u2 in F`, which is the
//! coordinate system the spectral embedding is built on.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default relative tolerance used throughout the crate.
pub const DEFAULT_TOL: f64 = 1e-9;

/// A quaternion `q0 + q1*i + q2*j + q3*k`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    pub const fn real(r: f64) -> Self {
        Quaternion::new(r, 0.0, 0.0, 0.0)
    }

    /// Real part.
    pub fn re(self) -> f64 {
        self.q0
    }

    /// Vector (imaginary) part, as a quaternion with zero real part.
    pub fn vector_part(self) -> Self {
        Quaternion::new(0.0, self.q1, self.q2, self.q3)
    }

    /// Conjugate `q0 - q1*i - q2*j - q3*k`.
    pub fn conj(self) -> Self {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    /// `|q|² = q0² + q1² + q2² + q3²`.
    pub fn abs_sq(self) -> f64 {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    /// Absolute value `(q q̄)^(1/2)`.
    pub fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }

    /// Euclidean inner product of R⁴.
    pub fn dot(self, other: Self) -> f64 {
        self.q0 * other.q0 + self.q1 * other.q1 + self.q2 * other.q2 + self.q3 * other.q3
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }

    /// `|self - other| <= tol * max(1, |self|, |other|)`.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        let scale = 1.0_f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol * scale
    }

    pub fn coords(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn from_coords(c: [f64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Self) -> Self {
        Quaternion::new(
            self.q0 + rhs.q0,
            self.q1 + rhs.q1,
            self.q2 + rhs.q2,
            self.q3 + rhs.q3,
        )
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::new(
            self.q0 - rhs.q0,
            self.q1 - rhs.q1,
            self.q2 - rhs.q2,
            self.q3 - rhs.q3,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Self {
        Quaternion::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    /// Hamilton product: `qp = q0p0 - (q⃗,p⃗) + (q0 p⃗ + p0 q⃗ + q⃗ × p⃗)`.
    fn mul(self, rhs: Self) -> Self {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (rhs.q0, rhs.q1, rhs.q2, rhs.q3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:+.6}{:+.6}i{:+.6}j{:+.6}k",
            self.q0, self.q1, self.q2, self.q3
        )
    }
}

/// Quaternion product (free-function form of [`Quaternion::mul`]).
pub fn q_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// Quaternion conjugate.
pub fn q_conj(q: Quaternion) -> Quaternion {
    q.conj()
}

/// Quaternion absolute value.
pub fn q_abs(q: Quaternion) -> f64 {
    q.abs()
}

/// Normalizes the vector part of a nonreal quaternion to an imaginary unit.
///
/// Returns `f = q⃗ / |q⃗|`, the generator of the subfield containing `q`.
pub fn make_imaginary_unit(q: Quaternion) -> Result<Quaternion> {
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    let v = q.vector_part();
    let norm = v.abs();
    if norm <= 1e-12 * 1.0_f64.max(q.abs()) {
        return Err(Error::RealInput);
    }
    Ok(v.scale(1.0 / norm))
}

/// An element `a + b*f` of the subfield generated by a frame's `f`.
///
/// Stored by its coordinates in `{1, f}` so the arithmetic stays exactly
/// complex-like and never drifts off the subfield.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct FScalar {
    pub a: f64,
    pub b: f64,
}

impl FScalar {
    pub const ZERO: FScalar = FScalar { a: 0.0, b: 0.0 };
    pub const ONE: FScalar = FScalar { a: 1.0, b: 0.0 };

    pub const fn new(a: f64, b: f64) -> Self {
        FScalar { a, b }
    }

    pub const fn real(r: f64) -> Self {
        FScalar { a: r, b: 0.0 }
    }

    pub fn conj(self) -> Self {
        FScalar::new(self.a, -self.b)
    }

    pub fn abs_sq(self) -> f64 {
        self.a * self.a + self.b * self.b
    }

    pub fn abs(self) -> f64 {
        self.abs_sq().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

impl Add for FScalar {
    type Output = FScalar;
    fn add(self, rhs: Self) -> Self {
        FScalar::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for FScalar {
    type Output = FScalar;
    fn sub(self, rhs: Self) -> Self {
        FScalar::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for FScalar {
    type Output = FScalar;
    fn neg(self) -> Self {
        FScalar::new(-self.a, -self.b)
    }
}

impl Mul for FScalar {
    type Output = FScalar;
    fn mul(self, rhs: Self) -> Self {
        FScalar::new(
            self.a * rhs.a - self.b * rhs.b,
            self.a * rhs.b + self.b * rhs.a,
        )
    }
}

impl Mul<f64> for FScalar {
    type Output = FScalar;
    fn mul(self, s: f64) -> Self {
        FScalar::new(self.a * s, self.b * s)
    }
}

impl Div<f64> for FScalar {
    type Output = FScalar;
    fn div(self, s: f64) -> Self {
        FScalar::new(self.a / s, self.b / s)
    }
}

impl fmt::Debug for FScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.6}{:+.6}f", self.a, self.b)
    }
}

/// An orthonormal basis `{1, f, phi, f*phi}` of the quaternions.
///
/// `f` generates the subfield; `phi` is a deterministic unit orthogonal to
/// `span{1, f}`, chosen among `i, j, k` by largest orthogonal residual with
/// ties broken in the order `i < j < k`, then normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    f: Quaternion,
    phi: Quaternion,
    fphi: Quaternion,
}

impl Frame {
    /// Builds the frame determined by an imaginary unit `f`.
    pub fn new(f: Quaternion) -> Result<Frame> {
        if !f.is_finite() {
            return Err(Error::NonFinite);
        }
        let norm = f.abs();
        if f.re().abs() > 1e-9 || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::NotImaginaryUnit { re: f.re(), norm });
        }
        let candidates = [Quaternion::I, Quaternion::J, Quaternion::K];
        let mut best = Quaternion::ZERO;
        let mut best_res = -1.0;
        for c in candidates {
            let perp = c - f.scale(c.dot(f));
            let res = perp.abs_sq();
            if res > best_res {
                best_res = res;
                best = perp;
            }
        }
        let phi = best.scale(1.0 / best.abs());
        let fphi = f * phi;
        Ok(Frame { f, phi, fphi })
    }

    /// Frame generated by any nonreal quaternion (via [`make_imaginary_unit`]).
    pub fn from_generator(q: Quaternion) -> Result<Frame> {
        Frame::new(make_imaginary_unit(q)?)
    }

    /// The conventional complex embedding: `f = i`, `phi = j`, `f*phi = k`.
    pub fn complex() -> Frame {
        Frame {
            f: Quaternion::I,
            phi: Quaternion::J,
            fphi: Quaternion::K,
        }
    }

    pub fn f(&self) -> Quaternion {
        self.f
    }

    pub fn phi(&self) -> Quaternion {
        self.phi
    }

    pub fn fphi(&self) -> Quaternion {
        self.fphi
    }

    /// Splits `q = u1 + u2*phi` with `u1, u2` in the subfield.
    pub fn split(&self, q: Quaternion) -> (FScalar, FScalar) {
        let c0 = q.re();
        let c1 = q.dot(self.f);
        let c2 = q.dot(self.phi);
        let c3 = q.dot(self.fphi);
        (FScalar::new(c0, c1), FScalar::new(c2, c3))
    }

    /// Inverse of [`Frame::split`].
    pub fn recompose(&self, u1: FScalar, u2: FScalar) -> Quaternion {
        Quaternion::real(u1.a) + self.f.scale(u1.b) + self.phi.scale(u2.a) + self.fphi.scale(u2.b)
    }

    /// Coordinates `(a, b)` with `q = a + phi*b`.
    ///
    /// Right multiplication by a subfield scalar acts coordinatewise in this
    /// form (`phi*b*u = phi*(b*u)`), which the `u1 + u2*phi` split does not
    /// satisfy; conversion is `a = u1`, `b = conj(u2)`.
    pub fn coords(&self, q: Quaternion) -> (FScalar, FScalar) {
        let (u1, u2) = self.split(q);
        (u1, u2.conj())
    }

    /// Inverse of [`Frame::coords`].
    pub fn from_coords(&self, a: FScalar, b: FScalar) -> Quaternion {
        self.recompose(a, b.conj())
    }

    /// Embeds a subfield scalar back into the quaternions: `a + b*f`.
    pub fn embed_f(&self, u: FScalar) -> Quaternion {
        Quaternion::real(u.a) + self.f.scale(u.b)
    }

    /// The subfield component `u1` of `q = u1 + u2*phi`.
    pub fn f_part(&self, q: Quaternion) -> FScalar {
        self.split(q).0
    }
}

/// Free-function form of [`Frame::new`].
pub fn build_frame(f: Quaternion) -> Result<Frame> {
    Frame::new(f)
}

/// Free-function form of [`Frame::split`].
pub fn symplectic_split(q: Quaternion, frame: &Frame) -> (FScalar, FScalar) {
    frame.split(q)
}
