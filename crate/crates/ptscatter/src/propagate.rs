//! Transfer matrices: carry Cauchy data (f, f') of −f'' + q f = k² f across
//! the support window [−ρ, ρ].
//!
//! Every propagator is a product of exact constant-coefficient step matrices,
//! so det M = 1 holds to roundoff (Wronskian conservation) for all variants.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::Mat2C;
use crate::potential::{interpolate_samples, Potential};

/// Entry magnitude beyond which propagation reports [`Error::Overflow`].
pub const OVERFLOW_LIMIT: f64 = 1e300;

/// Below this |κL| the constant-step entries switch to series evaluation,
/// which removes the cancellation at κ² = k² − v ≈ 0.
const SERIES_THRESHOLD: f64 = 1e-4;

/// A wavenumber in the closed upper half-plane admissible for continuation:
/// either Im k > 0, or the real-axis limit Im k = 0 with Re k ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber(Complex64);

impl Wavenumber {
    pub fn new(k: Complex64) -> Result<Self> {
        let ok =
            k.re.is_finite() && k.im.is_finite() && (k.im > 0.0 || (k.im == 0.0 && k.re != 0.0));
        if ok {
            Ok(Wavenumber(k))
        } else {
            Err(Error::InvalidWavenumber { k })
        }
    }

    /// Convenience constructor from parts.
    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    /// True off the imaginary axis (Re k ≠ 0), where the generalized
    /// coefficients are defined.
    pub fn in_c_plus_prime(&self) -> bool {
        self.0.re != 0.0
    }

    /// True for the real-axis limit Im k = 0.
    pub fn is_real_axis(&self) -> bool {
        self.0.im == 0.0
    }

    /// The partner point −k̄ (reflection across the imaginary axis), which
    /// pairs with k in every symmetry relation.
    pub fn mirror(&self) -> Wavenumber {
        Wavenumber(-self.0.conj())
    }
}

/// Exact transfer matrix of a constant potential `v` over a step of length
/// `len`: entries cos(κL) and sin(κL)/κ with κ² = k² − v. The entries are
/// even in κ, so the square-root branch is irrelevant.
pub fn constant_step(v: Complex64, len: f64, k: Complex64) -> Mat2C {
    let w = k * k - v;
    let kappa = w.sqrt();
    let z = kappa * len;
    let (cos_term, sinc_term) = if z.norm() < SERIES_THRESHOLD {
        // cos(z) and len*sinc(z) as series in z² = w len²; three terms leave
        // a relative error below 1e-27 at the switch point.
        let z2 = w * (len * len);
        let cos_term = Complex64::new(1.0, 0.0) - z2 * 0.5 + z2 * z2 * (1.0 / 24.0)
            - z2 * z2 * z2 * (1.0 / 720.0);
        let sinc = Complex64::new(1.0, 0.0) - z2 * (1.0 / 6.0) + z2 * z2 * (1.0 / 120.0)
            - z2 * z2 * z2 * (1.0 / 5040.0);
        (cos_term, sinc * len)
    } else {
        (z.cos(), z.sin() / kappa)
    };
    Mat2C::new(cos_term, sinc_term, -w * sinc_term, cos_term)
}

/// Interface jump of the point interaction: diag(e^{iβ}, e^{−iβ}) with
/// e^{iβ} = (2+iγ)/(2−iγ); determinant exactly 1.
pub fn point_interaction_jump(gamma: f64) -> Mat2C {
    let num = Complex64::new(2.0, gamma);
    let den = Complex64::new(2.0, -gamma);
    Mat2C::diag(num / den, den / num)
}

/// Transfer matrix M(k) with (f(ρ), f'(ρ))ᵀ = M · (f(−ρ), f'(−ρ))ᵀ for every
/// solution of −f'' + q f = k² f that is classical away from x = 0 in the
/// point-interaction case.
pub fn transfer_matrix(q: &Potential, k: Wavenumber) -> Result<Mat2C> {
    let kv = k.value();
    let m = match q {
        Potential::Free { rho } => constant_step(Complex64::new(0.0, 0.0), 2.0 * rho, kv),
        Potential::PointInteraction { gamma, rho } => {
            let jump = point_interaction_jump(*gamma);
            if *rho == 0.0 {
                jump
            } else {
                let half = constant_step(Complex64::new(0.0, 0.0), *rho, kv);
                half * jump * half
            }
        }
        Potential::PiecewiseConstant { rho, segments } => {
            piecewise_interval(segments, kv, -rho, *rho)
        }
        Potential::Sampled { rho, values } => {
            let steps = (values.len() - 1).max(64);
            return transfer_matrix_sampled(*rho, values, k, steps);
        }
    };
    check_overflow(m, kv)
}

/// Piecewise-constant propagation over [a, b], segments clipped to the window.
pub(crate) fn piecewise_interval(
    segments: &[crate::potential::Segment],
    k: Complex64,
    a: f64,
    b: f64,
) -> Mat2C {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = Mat2C::identity();
    let mut x = a;
    for s in segments {
        let lo = s.lo.max(a);
        let hi = s.hi.min(b);
        if hi <= lo {
            continue;
        }
        if lo > x {
            m = constant_step(zero, lo - x, k) * m;
        }
        m = constant_step(s.value, hi - lo, k) * m;
        x = hi;
    }
    if x < b {
        m = constant_step(zero, b - x, k) * m;
    }
    m
}

/// Midpoint one-point Magnus scheme over `steps` uniform steps; exact for
/// constants, second-order for smooth q. `values` is the uniform sample grid
/// on [−ρ, ρ] read through linear interpolation.
pub fn transfer_matrix_sampled(
    rho: f64,
    values: &[Complex64],
    k: Wavenumber,
    steps: usize,
) -> Result<Mat2C> {
    assert!(steps >= 1, "need at least one step");
    assert!(values.len() >= 2, "need at least two samples");
    let kv = k.value();
    let h = 2.0 * rho / steps as f64;
    let mut m = Mat2C::identity();
    for j in 0..steps {
        let x_mid = -rho + (j as f64 + 0.5) * h;
        let v = interpolate_samples(rho, values, x_mid);
        m = constant_step(v, h, kv) * m;
        if !m.is_finite() {
            return Err(Error::Overflow { k: kv });
        }
    }
    check_overflow(m, kv)
}

fn check_overflow(m: Mat2C, k: Complex64) -> Result<Mat2C> {
    if m.is_finite() && m.max_abs() <= OVERFLOW_LIMIT {
        Ok(m)
    } else {
        Err(Error::Overflow { k })
    }
}
