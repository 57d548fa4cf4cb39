//! Spectral decomposition of skew-selfadjoint quaternion matrices.
//!
//! At finite dimension every skew-selfadjoint operator on the right
//! quaternion module ℍⁿ decomposes into a projection-valued measure `E` on
//! atoms of the half-axis `f_+ = {t*f : t >= 0}` together with a complex
//! structure `J` (`J² = -I`, `J* = -J`) commuting with it, and the operator
//! itself is `A = sum_k t_k J E_k`. When the spectrum is simple there is a
//! generating vector `g` with `Jg = R_f g`, and `A` is unitarily equivalent
//! to left multiplication by the independent variable on a discrete
//! `L²_sigma` built from the weights `sigma_k = <E_k g, g>`.
//!
//! Module layout:
//! - [`quat`]: quaternion arithmetic, subfield frames, symplectic splits
//! - [`hmod`]: the module ℍⁿ with its inner product and F-span machinery
//! - [`spectral`]: the symplectic embedding, a Jacobi eigensolver over the
//!   subfield, and the spectral pair `(E, J)`
//! - [`genvec`]: simple-spectrum detection and the special generating vector
//! - [`model`]: the discrete multiplication-operator model and its checks
//! - [`realop`]: real-matrix views used to verify operator identities
//! - [`synth`]: seeded instance generators
//! - [`verify`]: named residual suites shared by the CLI and the tests
//! - [`io`]: JSON file formats with bit-exact round trips

pub mod error;
pub mod genvec;
pub mod hmod;
pub mod io;
pub mod model;
pub mod quat;
pub mod realop;
pub mod spectral;
pub mod synth;
pub mod verify;

pub use error::{Error, Result};
