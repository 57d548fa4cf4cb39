//! Seeded generators for test instances.
//!
//! Everything here is deterministic per seed (ChaCha8 stream), so generated
//! files and suites reproduce bit-for-bit across runs and platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hmod::{inner, QVector};
use crate::quat::Quaternion;
use crate::spectral::QMatrix;

pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform coordinates in `[-1, 1]⁴`.
pub fn random_quaternion(rng: &mut impl Rng) -> Quaternion {
    Quaternion::new(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

/// A random imaginary unit (normalized vector part of a nonreal draw).
pub fn random_unit_imaginary(rng: &mut impl Rng) -> Quaternion {
    loop {
        let v = random_quaternion(rng).vector_part();
        let norm = v.abs();
        if norm > 0.1 {
            return v.scale(1.0 / norm);
        }
    }
}

pub fn random_qvector(rng: &mut impl Rng, n: usize) -> QVector {
    QVector::new((0..n).map(|_| random_quaternion(rng)).collect())
}

pub fn random_unit_qvector(rng: &mut impl Rng, n: usize) -> QVector {
    loop {
        let v = random_qvector(rng, n);
        let norm = v.norm();
        if norm > 0.1 {
            return v.scale(1.0 / norm);
        }
    }
}

pub fn random_qmatrix(rng: &mut impl Rng, n: usize) -> QMatrix {
    let mut m = QMatrix::zeros(n);
    for r in 0..n {
        for c in 0..n {
            m.set(r, c, random_quaternion(rng));
        }
    }
    m
}

/// `(B - B*)/2` for a uniform random `B`; skew-selfadjoint by construction.
pub fn random_skew(rng: &mut impl Rng, n: usize) -> QMatrix {
    let b = random_qmatrix(rng, n);
    b.sub(&b.adjoint()).scale(0.5)
}

/// An ℍ-orthonormal basis `{u_k}` of ℍⁿ from random draws.
pub fn random_unitary_basis(rng: &mut impl Rng, n: usize) -> Vec<QVector> {
    let mut basis: Vec<QVector> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v = random_qvector(rng, n);
        for _ in 0..2 {
            for u in &basis {
                let c = inner(&v, u).expect("equal lengths");
                v = v.sub(&u.right_mul(c));
            }
        }
        let norm = v.norm();
        if norm > 0.1 {
            basis.push(v.scale(1.0 / norm));
        }
    }
    basis
}

/// Distinct atom values in `[0.5, n + 0.5]`, pairwise gaps above 0.05.
fn distinct_atoms(rng: &mut impl Rng, count: usize, n: usize) -> Vec<f64> {
    loop {
        let mut ts: Vec<f64> = (0..count)
            .map(|_| rng.random_range(0.5..(n as f64 + 0.5)))
            .collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if ts.windows(2).all(|w| w[1] - w[0] > 0.05) {
            return ts;
        }
    }
}

/// A simple-spectrum skew-selfadjoint matrix with known atoms.
///
/// Built as `A x = sum_k u_k w_k <x, u_k>` over a random ℍ-orthonormal basis
/// with `w_k = t_k * f_k` for random imaginary units `f_k`; each block is a
/// rank-one atom at `t_k`. With `zero_atom`, the first atom is `t = 0`.
pub fn random_simple_skew(rng: &mut impl Rng, n: usize, zero_atom: bool) -> (QMatrix, Vec<f64>) {
    let basis = random_unitary_basis(rng, n);
    let mut atoms = if zero_atom && n > 1 {
        distinct_atoms(rng, n - 1, n)
    } else if zero_atom {
        Vec::new()
    } else {
        distinct_atoms(rng, n, n)
    };
    if zero_atom {
        atoms.insert(0, 0.0);
    }
    let mut a = QMatrix::zeros(n);
    for (k, u) in basis.iter().enumerate() {
        if atoms[k] == 0.0 {
            continue;
        }
        let w = random_unit_imaginary(rng).scale(atoms[k]);
        for r in 0..n {
            for c in 0..n {
                let add = u.get(r) * w * u.get(c).conj();
                a.set(r, c, a.get(r, c) + add);
            }
        }
    }
    (a, atoms)
}

/// The matrix for a `gen` request; deterministic per seed.
pub fn generate(n: usize, seed: u64, simple: bool, zero_atom: bool) -> QMatrix {
    let mut rng = rng_for_seed(seed);
    if simple {
        random_simple_skew(&mut rng, n, zero_atom).0
    } else {
        random_skew(&mut rng, n)
    }
}
