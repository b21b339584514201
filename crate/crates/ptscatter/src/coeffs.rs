//! Generalized reflection/transmission coefficients at complex k.
//!
//! The traveling waves carry the incident factor e^{∓ik̄x} (conjugated
//! wavenumber) against outgoing/transmitted factors e^{±ikx}; this is the
//! analytic-continuation device that makes the S-matrix assembly below work
//! on the whole of {Re k ≠ 0, Im k ≥ 0}. For real k the forms reduce to the
//! textbook scattering ansatz.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::{Mat2C, SINGULARITY_THRESHOLD};
use crate::potential::Potential;
use crate::propagate::{transfer_matrix, Wavenumber};

/// Generalized coefficients R^l, R^r, T^l, T^r at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringCoefficients {
    pub k: Wavenumber,
    pub rho: f64,
    pub rl: Complex64,
    pub rr: Complex64,
    pub tl: Complex64,
    pub tr: Complex64,
}

/// β with e^{iβ} = (2+iγ)/(2−iγ); the principal value 2·arctan(γ/2).
pub fn beta_from_gamma(gamma: f64) -> f64 {
    2.0 * (gamma / 2.0).atan()
}

/// Solve the traveling-wave matching problem for a potential with transfer
/// matrix M(k).
///
/// Right incidence: f = e^{−ik̄x} + R^r e^{ikx} for x ≥ ρ, f = T^r e^{−ikx}
/// for x ≤ −ρ; imposing (f(ρ), f'(ρ))ᵀ = M (f(−ρ), f'(−ρ))ᵀ gives a 2×2
/// linear system for (T^r, R^r). Left incidence is the mirror ansatz.
pub fn scattering_coefficients(q: &Potential, k: Wavenumber) -> Result<ScatteringCoefficients> {
    if !k.in_c_plus_prime() {
        return Err(Error::DomainError { k: k.value() });
    }
    let m = transfer_matrix(q, k)?;
    coefficients_from_transfer(&m, q.support_radius(), k)
}

/// Matching step separated out so closed-form transfer matrices can be fed
/// directly in tests.
pub(crate) fn coefficients_from_transfer(
    m: &Mat2C,
    rho: f64,
    k: Wavenumber,
) -> Result<ScatteringCoefficients> {
    let kv = k.value();
    let kb = kv.conj();
    let i = Complex64::new(0.0, 1.0);
    let ep = (i * kv * rho).exp(); // e^{ik rho}
    let em = (-i * kb * rho).exp(); // e^{-i kbar rho}

    // Cauchy data of e^{-ikx} at x = -rho pushed to +rho.
    let u = m.mul_vec([ep, -i * kv * ep]);

    // (T^r, R^r): Tr*u - Rr*(ep, ik ep) = (em, -i kbar em)
    let a1 = Mat2C::new(u[0], -ep, u[1], -i * kv * ep);
    let x1 = solve_matching(&a1, [em, -i * kb * em], kv)?;
    let (tr, rr) = (x1[0], x1[1]);

    // (T^l, R^l): Tl*(ep, ik ep) - Rl*u = M*(em, i kbar em)
    let a2 = Mat2C::new(ep, -u[0], i * kv * ep, -u[1]);
    let rhs2 = m.mul_vec([em, i * kb * em]);
    let x2 = solve_matching(&a2, rhs2, kv)?;
    let (tl, rl) = (x2[0], x2[1]);

    Ok(ScatteringCoefficients {
        k,
        rho,
        rl,
        rr,
        tl,
        tr,
    })
}

fn solve_matching(a: &Mat2C, rhs: [Complex64; 2], k: Complex64) -> Result<[Complex64; 2]> {
    let det = a.det();
    let scale = a.max_abs();
    if det.norm() <= SINGULARITY_THRESHOLD * 1f64.max(scale * scale) {
        return Err(Error::SingularMatching {
            k,
            det_magnitude: det.norm(),
        });
    }
    Ok(a.inverse()
        .map_err(|_| Error::SingularMatching {
            k,
            det_magnitude: det.norm(),
        })?
        .mul_vec(rhs))
}

/// Closed-form coefficients of the point-interaction family H_γ (ρ = 0):
/// T^l = T^r = Re k / (k cos β), R^r = i(Re k sin β − Im k cos β)/(k cos β),
/// R^l = −i(Re k sin β + Im k cos β)/(k cos β).
pub fn point_interaction_coefficients(gamma: f64, k: Wavenumber) -> Result<ScatteringCoefficients> {
    if gamma.abs() == 2.0 {
        return Err(Error::WholePlaneSpectrum { gamma });
    }
    if !k.in_c_plus_prime() {
        return Err(Error::DomainError { k: k.value() });
    }
    let beta = beta_from_gamma(gamma);
    let (sb, cb) = beta.sin_cos();
    let kv = k.value();
    let (re_k, im_k) = (kv.re, kv.im);
    let i = Complex64::new(0.0, 1.0);
    let denom = kv * cb;
    let t = Complex64::new(re_k, 0.0) / denom;
    let rr = i * (re_k * sb - im_k * cb) / denom;
    let rl = -i * (re_k * sb + im_k * cb) / denom;
    Ok(ScatteringCoefficients {
        k,
        rho: 0.0,
        rl,
        rr,
        tl: t,
        tr: t,
    })
}
