//! Real-matrix views of operators on ℍⁿ.
//!
//! Several operators in the spectral pair (`R_phi`, the one-sided measures
//! `E_F(±t)`, and `J` on a kernel) are real-linear but not ℍ-linear, so
//! operator identities involving them are checked on the 4n-dimensional real
//! matrix in the orthonormal basis `{e_c * u : u in {1, f, phi, f*phi}}`.
//! In that basis the real adjoint is the transpose, and an ℍ-linear matrix
//! `M` satisfies `frob_real(M) = 2 * frob_quat(M)`; [`RMatrix::quat_norm`]
//! rescales so residuals compare against quaternion Frobenius tolerances.

use crate::hmod::QVector;
use crate::quat::{Frame, Quaternion};
use crate::spectral::{apply_f, FMatrix, QMatrix};

/// A dense real matrix on the 4n real coordinates of ℍⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RMatrix {
    pub fn zeros(dim: usize) -> Self {
        RMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = RMatrix::zeros(dim);
        for idx in 0..dim {
            m.set(idx, idx, 1.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn matmul(&self, rhs: &RMatrix) -> RMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = RMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for k in 0..self.dim {
                let v = self.get(r, k);
                if v == 0.0 {
                    continue;
                }
                for c in 0..self.dim {
                    out.data[r * self.dim + c] += v * rhs.get(k, c);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &RMatrix) -> RMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        RMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &RMatrix) -> RMatrix {
        debug_assert_eq!(self.dim, rhs.dim);
        RMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn transpose(&self) -> RMatrix {
        let mut out = RMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius norm rescaled to the quaternion-matrix convention.
    pub fn quat_norm(&self) -> f64 {
        self.frob_norm() / 2.0
    }
}

/// Real coordinates of a vector in the frame basis, entry-major.
pub fn real_coords(x: &QVector, frame: &Frame) -> Vec<f64> {
    let mut out = Vec::with_capacity(4 * x.len());
    for q in x.iter() {
        out.push(q.re());
        out.push(q.dot(frame.f()));
        out.push(q.dot(frame.phi()));
        out.push(q.dot(frame.fphi()));
    }
    out
}

/// The real basis vector with unit `u_idx` (0..4, for `1, f, phi, f*phi`) in
/// slot `c`.
fn basis_vector(n: usize, c: usize, u_idx: usize, frame: &Frame) -> QVector {
    let unit = match u_idx {
        0 => Quaternion::ONE,
        1 => frame.f(),
        2 => frame.phi(),
        _ => frame.fphi(),
    };
    let mut v = QVector::zeros(n);
    v.set(c, unit);
    v
}

/// Materializes a real-linear map on ℍⁿ as its 4n x 4n matrix.
pub fn rmatrix_of(n: usize, frame: &Frame, mut op: impl FnMut(&QVector) -> QVector) -> RMatrix {
    let dim = 4 * n;
    let mut m = RMatrix::zeros(dim);
    for c in 0..n {
        for u in 0..4 {
            let img = op(&basis_vector(n, c, u, frame));
            let col = real_coords(&img, frame);
            for (r, v) in col.into_iter().enumerate() {
                m.set(r, 4 * c + u, v);
            }
        }
    }
    m
}

/// Real matrix of a quaternion matrix.
pub fn rmatrix_of_qmatrix(a: &QMatrix, frame: &Frame) -> RMatrix {
    rmatrix_of(a.dim(), frame, |x| a.matvec(x))
}

/// Real matrix of the right multiplication `R_q`.
pub fn rmatrix_of_right_mul(q: Quaternion, n: usize, frame: &Frame) -> RMatrix {
    rmatrix_of(n, frame, |x| x.right_mul(q))
}

/// Real matrix of a 2n x 2n subfield matrix acting through symplectic
/// coordinates.
pub fn rmatrix_of_fmatrix(m: &FMatrix, frame: &Frame) -> RMatrix {
    let n = m.dim() / 2;
    rmatrix_of(n, frame, |x| apply_f(m, x, frame))
}
