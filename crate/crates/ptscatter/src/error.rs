use num_complex::Complex64;
use thiserror::Error;

/// Failures of the numerical core.
///
/// Singularity variants carry the offending wavenumber and the magnitude that
/// tripped the threshold so grid sweeps can turn them into per-point statuses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is numerically singular (|det| = {det_magnitude:.3e})")]
    SingularMatrix { det_magnitude: f64 },

    #[error("transfer-matrix entries overflowed at k = {k}")]
    Overflow { k: Complex64 },

    #[error("traveling-wave matching system is singular at k = {k} (|det| = {det_magnitude:.3e})")]
    SingularMatching { k: Complex64, det_magnitude: f64 },

    #[error("k = {k} lies on the imaginary axis; generalized coefficients need Re k != 0")]
    DomainError { k: Complex64 },

    #[error("|gamma| = 2: the point-interaction spectrum fills the plane and no S-matrix exists (gamma = {gamma})")]
    WholePlaneSpectrum { gamma: f64 },

    #[error("image-set matrix does not exist at k = {k} (|delta| = {delta_magnitude:.3e})")]
    SingularImageSet { k: Complex64, delta_magnitude: f64 },

    #[error("S-matrix does not exist at k = {k}: bracket I - 2(1+ik)T_k is singular")]
    SMatrixNonexistent { k: Complex64 },

    #[error("metric candidate is not Hermitian positive definite")]
    NotPositiveDefinite,

    #[error("fit objective is independent of chi; metric cannot be recovered from these samples")]
    DegenerateFit,

    #[error("invalid wavenumber {k}: need Im k > 0, or Im k = 0 with Re k != 0")]
    InvalidWavenumber { k: Complex64 },

    #[error("invalid potential: {0}")]
    InvalidPotential(String),
}

pub type Result<T> = std::result::Result<T, Error>;
