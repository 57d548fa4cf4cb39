use thiserror::Error;

/// Errors produced by the quaternionic spectral machinery.
#[derive(Debug, Error)]
pub enum Error {
    /// A real quaternion was given where a subfield generator is required.
    #[error("real quaternion does not determine a subfield")]
    RealInput,

    /// The quaternion is not a unit with zero real part.
    #[error("not an imaginary unit (re = {re:.3e}, |q| = {norm:.6})")]
    NotImaginaryUnit { re: f64, norm: f64 },

    /// Two vectors (or a vector and an operator) have incompatible sizes.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// `hermitian_eigen` was called on a matrix that is not Hermitian.
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    /// A spectral decomposition was requested for a matrix with `A* != -A`.
    #[error("matrix is not skew-selfadjoint (defect {defect:.3e})")]
    NotSkewSelfadjoint { defect: f64 },

    /// Some spectral atom carries multiplicity greater than one.
    #[error("operator does not have a simple spectrum")]
    NotSimpleSpectrum,

    /// The generating-vector construction produced an invalid certificate.
    #[error("generating-vector construction failed: {reason}")]
    ConstructionFailed { reason: String },

    /// A spectral weight vanished, contradicting the generating property.
    #[error("degenerate spectral weight {weight:.3e} at atom {atom}")]
    DegenerateWeight { atom: usize, weight: f64 },

    /// Input contained NaN or infinity.
    #[error("non-finite value in input")]
    NonFinite,

    /// A file could not be parsed or failed validation.
    #[error("invalid input file: {0}")]
    InvalidFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
