//! Numerical residuals for the symmetry relations: PT covariance, Hermitian
//! analyticity, contraction, real-axis unitarity, and the metric
//! (intertwining and monotonicity) relations. All residuals are operator
//! norms so they are scale-independent.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2C;

/// Default pass tolerances; the CLI lets configs override them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub pt: f64,
    pub hermitian: f64,
    pub contraction: f64,
    pub unitarity: f64,
    pub metric_intertwining: f64,
    pub metric_min_eig: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pt: 1e-8,
            hermitian: 1e-8,
            contraction: 1e-10,
            unitarity: 1e-8,
            metric_intertwining: 1e-8,
            metric_min_eig: 1e-8,
        }
    }
}

/// All residuals for one pair (k, −k̄) against a given metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationResiduals {
    pub pt_relation: f64,
    pub hermitian_analyticity: f64,
    pub contraction_excess: f64,
    pub metric_intertwining: f64,
    pub metric_contraction_min_eig: f64,
}

impl RelationResiduals {
    pub fn compute(s_k: &Mat2C, s_mkbar: &Mat2C, e_q: &Mat2C) -> Result<Self> {
        let (intertwining, min_eig) = check_metric_relations(s_k, s_mkbar, e_q)?;
        Ok(RelationResiduals {
            pt_relation: check_pt_relation(s_k, s_mkbar),
            hermitian_analyticity: check_hermitian_analyticity(s_k, s_mkbar),
            contraction_excess: check_contraction(s_k),
            metric_intertwining: intertwining,
            metric_contraction_min_eig: min_eig,
        })
    }
}

/// ‖S(k) − σ₁ conj(S(−k̄)) σ₁‖: the PT covariance defect (P = σ₁, T =
/// entrywise conjugation).
pub fn check_pt_relation(s_k: &Mat2C, s_mkbar: &Mat2C) -> f64 {
    debug_assert!(s_k.is_finite() && s_mkbar.is_finite());
    let sx = Mat2C::sigma_x();
    (*s_k - sx * s_mkbar.conj() * sx).operator_norm()
}

/// ‖S(−k̄) − S*(k)‖: zero for self-adjoint problems.
pub fn check_hermitian_analyticity(s_k: &Mat2C, s_mkbar: &Mat2C) -> f64 {
    debug_assert!(s_k.is_finite() && s_mkbar.is_finite());
    (*s_mkbar - s_k.adjoint()).operator_norm()
}

/// max(0, ‖S(k)‖ − 1): how far the value is from being a contraction.
pub fn check_contraction(s_k: &Mat2C) -> f64 {
    (s_k.operator_norm() - 1.0).max(0.0)
}

/// ‖S*(k) S(k) − I‖: the unitarity defect, meaningful on the real axis.
pub fn check_unitarity(s_k: &Mat2C) -> f64 {
    (s_k.adjoint() * *s_k - Mat2C::identity()).operator_norm()
}

/// Metric relations against a Hermitian positive-definite e^Q:
/// returns (‖e^Q S(−k̄) − S*(k) e^Q‖, smallest eigenvalue of
/// e^Q − S*(k) e^Q S(k)). The second relation passes when the eigenvalue is
/// ≥ −tolerance.
pub fn check_metric_relations(s_k: &Mat2C, s_mkbar: &Mat2C, e_q: &Mat2C) -> Result<(f64, f64)> {
    let scale = e_q.max_abs().max(1.0);
    if !e_q.is_hermitian(1e-10 * scale) {
        return Err(Error::NotPositiveDefinite);
    }
    let (min_eig_q, _) = e_q.hermitian_eigenvalues();
    if min_eig_q <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let intertwining = (*e_q * *s_mkbar - s_k.adjoint() * *e_q).operator_norm();
    let difference = *e_q - s_k.adjoint() * *e_q * *s_k;
    let (min_eig, _) = difference.hermitian_eigenvalues();
    Ok((intertwining, min_eig))
}

/// Finite-difference Cauchy-Riemann residual of a matrix-valued function at
/// k: ‖∂f/∂k̄‖∞ estimated with central differences of step h. Analytic
/// functions give O(h²‖f‴‖).
pub fn cauchy_riemann_residual<F: Fn(Complex64) -> Mat2C>(f: F, k: Complex64, h: f64) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let inv = Complex64::new(1.0 / (2.0 * h), 0.0);
    let dx = (f(k + Complex64::new(h, 0.0)) - f(k - Complex64::new(h, 0.0))) * inv;
    let dy = (f(k + Complex64::new(0.0, h)) - f(k - Complex64::new(0.0, h))) * inv;
    ((dx + dy * i) * Complex64::new(0.5, 0.0)).max_abs()
}
