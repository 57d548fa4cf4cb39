//! Simple-spectrum detection and the special generating vector.
//!
//! An operator has a simple spectrum when some vector `g` generates the whole
//! module through the measure images `E(Δ)g`; at finite dimension this is
//! equivalent to every atom carrying ℍ-multiplicity one (and hence to the
//! atom count equalling `n`). For such operators a generating vector can be
//! chosen with the extra property `Jg = R_f g`: decompose any generator
//! `y = y+ + R_phi x+` over `H+ = E_F(f_+)H`, project `x+` off the cyclic
//! F-span of `y+`, and add the residual to `y+`. The result lies in `H+`,
//! where `J` acts as `R_f` by construction.

use crate::error::{Error, Result};
use crate::hmod::{f_orthonormalize, h_rank, inner, FSubspace, QVector};
use crate::spectral::{apply_f, SpectralData};

/// A generating vector together with its verification data.
#[derive(Clone, Debug)]
pub struct GeneratingVector {
    pub g: QVector,
    pub certificate: Certificate,
}

/// Residuals recorded while constructing a generating vector.
#[derive(Clone, Copy, Debug)]
pub struct Certificate {
    /// `|Jg - R_f g| / |g|`.
    pub j_residual: f64,
    /// ℍ-rank of `{E_k g}`; equals `n` for a generating vector.
    pub cyclic_rank: usize,
    /// Smallest weight `re <E_k g, g>`; positive for a generating vector.
    pub min_weight: f64,
}

/// Whether every atom has ℍ-multiplicity one.
///
/// Equivalent to the existence of a generating vector at finite dimension:
/// the atom images `E_k g` of any `g` span at most one ℍ-line per atom, so a
/// full span forces one atom per dimension, and conversely nonzero vectors
/// picked from each rank-one eigenspace sum to a generator.
pub fn has_simple_spectrum(sd: &SpectralData, tol: f64) -> bool {
    if sd.num_atoms() != sd.n() {
        return false;
    }
    let trace_tol = tol.max(1e-6);
    (0..sd.num_atoms()).all(|k| sd.h_rank(k) == 1 && (sd.e(k).re_trace() - 1.0).abs() <= trace_tol)
}

/// ℍ-rank of the cyclic family `{E_k g}`.
pub fn cyclic_rank_h(sd: &SpectralData, g: &QVector, tol: f64) -> usize {
    let images: Vec<QVector> = (0..sd.num_atoms()).map(|k| sd.e(k).matvec(g)).collect();
    h_rank(&images, sd.frame(), tol)
}

/// The cyclic F-span `C_F(E_F, g)`.
///
/// The generating family consists of the interval measures `E_F(Δ)` for
/// intervals `Δ` of the half-axis, so the span is taken over the
/// nonnegative-side atom projections `{E_F({t_k}) g, E_F({0}) g}`; it is
/// always contained in `H+`.
pub fn cyclic_span_f(sd: &SpectralData, g: &QVector, tol: f64) -> FSubspace {
    let images: Vec<QVector> = (0..sd.num_atoms())
        .map(|k| apply_f(sd.ef_plus_at(k), g, sd.frame()))
        .collect();
    f_orthonormalize(&images, sd.frame(), tol)
}

/// Whether `g` generates: the images `{E_k g}` span all of ℍⁿ.
///
/// Interval measures are sums of atom projections, so atom images generate
/// the same span as interval images.
pub fn is_generating(sd: &SpectralData, g: &QVector, tol: f64) -> bool {
    cyclic_rank_h(sd, g, tol) == sd.n()
}

/// Constructs a generating vector with `Jg = R_f g`.
///
/// Steps:
/// 1. `y`: for each atom, normalize the first standard-basis image under
///    `E_k` with norm above `tol` and sum.
/// 2. `y+ = E_F(f_+) y`, `x+ = R_{-phi} (E_F(f_-) y)`; both lie in `H+`.
/// 3. `v+ = x+ - proj(x+, C_F(E_F, y+))`, `g = y+ + v+`.
/// 4. Certify `|Jg - R_f g| <= tol*|g|` and that `{E_k g}` has full rank.
pub fn special_generating_vector(sd: &SpectralData, tol: f64) -> Result<GeneratingVector> {
    if !has_simple_spectrum(sd, tol) {
        return Err(Error::NotSimpleSpectrum);
    }
    let n = sd.n();
    let frame = sd.frame();

    let mut y = QVector::zeros(n);
    for k in 0..sd.num_atoms() {
        let e = sd.e(k);
        let col = (0..n)
            .map(|c| e.column(c))
            .find(|col| col.norm() > tol)
            .ok_or_else(|| Error::ConstructionFailed {
                reason: format!("atom {k} has no basis image above tolerance"),
            })?;
        y = y.add(&col.scale(1.0 / col.norm()));
    }
    if !is_generating(sd, &y, tol) {
        return Err(Error::ConstructionFailed {
            reason: "initial vector is not generating".into(),
        });
    }

    let y_plus = sd.apply_ef_plus(&y);
    let x_plus = sd.apply_ef_minus(&y).right_mul(-frame.phi());

    let y_span = cyclic_span_f(sd, &y_plus, tol);
    let v_plus = x_plus.sub(&y_span.project(&x_plus)?);
    let g = y_plus.add(&v_plus);

    let g_norm = g.norm();
    if g_norm <= tol {
        return Err(Error::ConstructionFailed {
            reason: "constructed vector vanished".into(),
        });
    }
    let j_residual = sd.j().apply(&g).sub(&g.right_mul(frame.f())).norm() / g_norm;
    let cyclic_rank = cyclic_rank_h(sd, &g, tol);
    let min_weight = (0..sd.num_atoms())
        .map(|k| inner(&sd.e(k).matvec(&g), &g).expect("equal lengths").re())
        .fold(f64::INFINITY, f64::min);

    if j_residual > tol || cyclic_rank != n {
        return Err(Error::ConstructionFailed {
            reason: format!(
                "certificate failed: residual {j_residual:.3e}, rank {cyclic_rank} of {n}"
            ),
        });
    }
    Ok(GeneratingVector {
        g,
        certificate: Certificate {
            j_residual,
            cyclic_rank,
            min_weight,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{Frame, Quaternion, DEFAULT_TOL};
    use crate::spectral::{spectral_data, QMatrix};

    const TOL: f64 = 1e-12;

    fn decompose(entries: &[Quaternion]) -> SpectralData {
        let a = QMatrix::diagonal(entries);
        spectral_data(&a, &Frame::complex(), DEFAULT_TOL).unwrap()
    }

    #[test]
    fn simple_spectrum_detection() {
        let sd = decompose(&[Quaternion::I, Quaternion::K.scale(2.0)]);
        assert!(has_simple_spectrum(&sd, DEFAULT_TOL));
        let sd = decompose(&[Quaternion::I, Quaternion::I]);
        assert!(!has_simple_spectrum(&sd, DEFAULT_TOL));
        assert_eq!(sd.num_atoms(), 1);
        assert_eq!(sd.h_rank(0), 2);
        let sd = decompose(&[Quaternion::ZERO]);
        assert!(has_simple_spectrum(&sd, DEFAULT_TOL));
    }

    #[test]
    fn cyclic_spans() {
        let sd = decompose(&[Quaternion::I, Quaternion::K.scale(2.0)]);
        let zero = QVector::zeros(2);
        assert_eq!(cyclic_rank_h(&sd, &zero, DEFAULT_TOL), 0);
        let ones = QVector::new(vec![Quaternion::ONE, Quaternion::ONE]);
        assert_eq!(cyclic_rank_h(&sd, &ones, DEFAULT_TOL), 2);
        let sd2 = decompose(&[Quaternion::I, Quaternion::I]);
        assert_eq!(cyclic_rank_h(&sd2, &ones, DEFAULT_TOL), 1);
    }

    #[test]
    fn generating_predicate() {
        let sd = decompose(&[Quaternion::I, Quaternion::K.scale(2.0)]);
        let ones = QVector::new(vec![Quaternion::ONE, Quaternion::ONE]);
        assert!(is_generating(&sd, &ones, DEFAULT_TOL));
        assert!(!is_generating(&sd, &QVector::zeros(2), DEFAULT_TOL));
        let e1 = QVector::standard_basis(2, 0);
        assert!(!is_generating(&sd, &e1, DEFAULT_TOL));
    }

    #[test]
    fn special_vector_for_i() {
        let sd = decompose(&[Quaternion::I]);
        let gv = special_generating_vector(&sd, DEFAULT_TOL).unwrap();
        assert!(gv.g.get(0).approx_eq(Quaternion::ONE, TOL));
        assert!(gv.certificate.j_residual < TOL);
        assert_eq!(gv.certificate.cyclic_rank, 1);
    }

    #[test]
    fn special_vector_for_j() {
        // worked case: y = 1 decomposes over H+ into y+ = (1+k)/2 with
        // x+ already inside the cyclic span, so g = (1+k)/2
        let sd = decompose(&[Quaternion::J]);
        let gv = special_generating_vector(&sd, DEFAULT_TOL).unwrap();
        let expected = (Quaternion::ONE + Quaternion::K).scale(0.5);
        assert!(gv.g.get(0).approx_eq(expected, TOL));
        let jg = sd.j().apply(&gv.g);
        let rfg = gv.g.right_mul(Quaternion::I);
        assert!(jg.dist(&rfg) < TOL);
        assert!(is_generating(&sd, &gv.g, DEFAULT_TOL));
    }

    #[test]
    fn special_vector_for_zero() {
        let sd = decompose(&[Quaternion::ZERO]);
        let gv = special_generating_vector(&sd, DEFAULT_TOL).unwrap();
        assert!(gv.g.get(0).approx_eq(Quaternion::ONE, TOL));
        assert!(gv.certificate.j_residual < TOL);
    }

    #[test]
    fn special_vector_for_diagonal() {
        // hand-derived: g = (1, (1-j)/2)
        let sd = decompose(&[Quaternion::I, Quaternion::K.scale(2.0)]);
        let gv = special_generating_vector(&sd, DEFAULT_TOL).unwrap();
        assert!(gv.g.get(0).approx_eq(Quaternion::ONE, TOL));
        let expected = (Quaternion::ONE - Quaternion::J).scale(0.5);
        assert!(gv.g.get(1).approx_eq(expected, TOL));
        assert_eq!(gv.certificate.cyclic_rank, 2);
        assert!(gv.certificate.min_weight > 0.0);
    }

    #[test]
    fn multiplicity_is_rejected() {
        let sd = decompose(&[Quaternion::I, Quaternion::I]);
        assert!(matches!(
            special_generating_vector(&sd, DEFAULT_TOL),
            Err(Error::NotSimpleSpectrum)
        ));
    }
}
