//! Exact 2×2 complex linear algebra and the Pauli-basis decomposition.
//!
//! Everything here is closed-form: determinants, inverses, singular values and
//! Hermitian eigenvalues of a 2×2 matrix are quadratic-formula material, so no
//! iterative solver is involved anywhere in the crate.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Relative singularity threshold: a matrix counts as singular when
/// |det| <= threshold * max(1, max-entry-magnitude^2).
pub const SINGULARITY_THRESHOLD: f64 = 1e-14;

/// A dense 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Mat2C {
    /// Finiteness is enforced at operation boundaries (propagation reports
    /// [`Error::Overflow`], checks assert on their inputs), not here, so
    /// intermediate overflow can be detected rather than hidden.
    pub fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self { a11, a12, a21, a22 }
    }

    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn zero() -> Self {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    pub fn identity() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), d2)
    }

    /// Pauli matrix σ₁ (off-diagonal ones); also the parity image P on C².
    pub fn sigma_x() -> Self {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        )
    }

    /// Pauli matrix σ₂.
    pub fn sigma_y() -> Self {
        Self::new(
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        )
    }

    /// Pauli matrix σ₃.
    pub fn sigma_z() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entry magnitude; the scale used by singularity thresholds.
    pub fn max_abs(&self) -> f64 {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    /// Entrywise complex conjugate (the conjugation image T acting on matrices).
    pub fn conj(&self) -> Self {
        Self::new(
            self.a11.conj(),
            self.a12.conj(),
            self.a21.conj(),
            self.a22.conj(),
        )
    }

    /// Closed-form inverse.
    ///
    /// Fails with [`Error::SingularMatrix`] when |det| falls under the
    /// scale-aware threshold; upstream this is the signal for a vanishing
    /// image-set determinant or a nonexistent S-matrix.
    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        let scale = self.max_abs();
        let tol = SINGULARITY_THRESHOLD * 1f64.max(scale * scale);
        if det.norm() <= tol {
            return Err(Error::SingularMatrix {
                det_magnitude: det.norm(),
            });
        }
        let inv = det.inv();
        Ok(Self::new(
            self.a22 * inv,
            -self.a12 * inv,
            -self.a21 * inv,
            self.a11 * inv,
        ))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    /// Largest singular value, from the closed-form eigenvalues of A*A.
    ///
    /// Uses the Hermitian midpoint/radius form rather than the
    /// trace-determinant quadratic: the latter loses half the digits when
    /// the two singular values nearly coincide (every unitary value).
    pub fn operator_norm(&self) -> f64 {
        let b = self.adjoint() * *self;
        let mid = 0.5 * (b.a11.re + b.a22.re);
        let rad = (0.25 * (b.a11.re - b.a22.re).powi(2) + b.a12.norm_sqr()).sqrt();
        (mid + rad).max(0.0).sqrt()
    }

    /// Frobenius norm (root of the entrywise square sum).
    pub fn frobenius_norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }

    /// Coefficients (χ₀, χ₁, χ₂, χ₃) of A = χ₀σ₀ + χ₁σ₁ + χ₂σ₂ + χ₃σ₃.
    pub fn pauli_coefficients(&self) -> [Complex64; 4] {
        let half = Complex64::new(0.5, 0.0);
        let i = Complex64::new(0.0, 1.0);
        [
            (self.a11 + self.a22) * half,
            (self.a12 + self.a21) * half,
            i * (self.a12 - self.a21) * half,
            (self.a11 - self.a22) * half,
        ]
    }

    /// Rebuild a matrix from its Pauli coefficients; inverse of
    /// [`Mat2C::pauli_coefficients`].
    pub fn from_pauli(c: [Complex64; 4]) -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self::new(c[0] + c[3], c[1] - i * c[2], c[1] + i * c[2], c[0] - c[3])
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).max_abs() <= tol
    }

    /// Eigenvalues (min, max) of the Hermitian part (A + A*)/2.
    ///
    /// Meaningful for matrices that are Hermitian up to roundoff; the
    /// symmetrization makes the closed form immune to tiny asymmetries.
    pub fn hermitian_eigenvalues(&self) -> (f64, f64) {
        let h = (*self + self.adjoint()) * Complex64::new(0.5, 0.0);
        let mid = 0.5 * (h.a11.re + h.a22.re);
        let rad = (0.25 * (h.a11.re - h.a22.re).powi(2) + h.a12.norm_sqr()).sqrt();
        (mid - rad, mid + rad)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 + rhs.a11,
            self.a12 + rhs.a12,
            self.a21 + rhs.a21,
            self.a22 + rhs.a22,
        )
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 - rhs.a11,
            self.a12 - rhs.a12,
            self.a21 - rhs.a21,
            self.a22 - rhs.a22,
        )
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        Mat2C::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

impl Mul<Complex64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: Complex64) -> Mat2C {
        self.scale(rhs)
    }
}

impl Mul<f64> for Mat2C {
    type Output = Mat2C;
    fn mul(self, rhs: f64) -> Mat2C {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_products() {
        let x = Mat2C::sigma_x();
        let y = Mat2C::sigma_y();
        let z = Mat2C::sigma_z();
        assert_eq!(x * x, Mat2C::identity());
        // sigma_1 sigma_3 = -i sigma_2
        let expected = y.scale(c(0.0, -1.0));
        assert!(((x * z) - expected).max_abs() < 1e-15);
    }

    #[test]
    fn product_matches_hand_arithmetic() {
        let a = Mat2C::new(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0));
        let b = Mat2C::new(c(5.0, 0.0), c(6.0, 0.0), c(7.0, 0.0), c(8.0, 0.0));
        let p = a * b;
        assert_eq!(p.a11, c(19.0, 0.0));
        assert_eq!(p.a12, c(22.0, 0.0));
        assert_eq!(p.a21, c(43.0, 0.0));
        assert_eq!(p.a22, c(50.0, 0.0));
    }

    #[test]
    fn inverse_of_simple_matrices() {
        assert_eq!(Mat2C::identity().inverse().unwrap(), Mat2C::identity());
        let d = Mat2C::diag(c(2.0, 0.0), c(4.0, 0.0));
        let dinv = d.inverse().unwrap();
        assert!((dinv.a11 - c(0.5, 0.0)).norm() < 1e-15);
        assert!((dinv.a22 - c(0.25, 0.0)).norm() < 1e-15);
        let x = Mat2C::sigma_x();
        assert!((x.inverse().unwrap() - x).max_abs() < 1e-15);
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = Mat2C::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0));
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix { .. })));
        // scale-aware: a large matrix with proportionally tiny determinant is singular too
        let big = 1e10;
        let m = Mat2C::new(
            c(big, 0.0),
            c(2.0 * big, 0.0),
            c(2.0 * big, 0.0),
            c(4.0 * big, 0.0),
        );
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn adjoint_examples() {
        let m = Mat2C::diag(c(0.0, 1.0), c(0.0, -1.0));
        assert_eq!(m.adjoint(), Mat2C::diag(c(0.0, -1.0), c(0.0, 1.0)));
        let y = Mat2C::sigma_y();
        assert_eq!(y.adjoint(), y);
        let m = Mat2C::new(c(1.0, 0.0), c(2.0, 1.0), c(3.0, -1.0), c(4.0, 0.0));
        let a = m.adjoint();
        assert_eq!(a.a11, c(1.0, 0.0));
        assert_eq!(a.a12, c(3.0, 1.0));
        assert_eq!(a.a21, c(2.0, -1.0));
        assert_eq!(a.a22, c(4.0, 0.0));
    }

    #[test]
    fn operator_norm_examples() {
        assert!((Mat2C::identity().operator_norm() - 1.0).abs() < 1e-15);
        let d = Mat2C::diag(c(3.0, 0.0), c(0.5, 0.0));
        assert!((d.operator_norm() - 3.0).abs() < 1e-15);
        let m = Mat2C::sigma_x() * 0.7;
        assert!((m.operator_norm() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn pauli_decomposition_examples() {
        let cs = Mat2C::sigma_x().pauli_coefficients();
        assert!((cs[0].norm() + cs[2].norm() + cs[3].norm()) < 1e-15);
        assert!((cs[1] - c(1.0, 0.0)).norm() < 1e-15);

        let cs = Mat2C::identity().pauli_coefficients();
        assert!((cs[0] - c(1.0, 0.0)).norm() < 1e-15);

        let m = Mat2C::new(c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0), c(4.0, 0.0));
        let cs = m.pauli_coefficients();
        assert!((cs[0] - c(2.5, 0.0)).norm() < 1e-15);
        assert!((cs[1] - c(2.5, 0.0)).norm() < 1e-15);
        assert!((cs[2] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((cs[3] - c(-1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_eigenvalues_closed_form() {
        let m = Mat2C::diag(c(1.0, 0.0), c(-3.0, 0.0));
        let (lo, hi) = m.hermitian_eigenvalues();
        assert!((lo + 3.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
        let y = Mat2C::sigma_y();
        let (lo, hi) = y.hermitian_eigenvalues();
        assert!((lo + 1.0).abs() < 1e-15 && (hi - 1.0).abs() < 1e-15);
    }

    fn arb_complex() -> impl Strategy<Value = Complex64> {
        (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| Complex64::new(re, im))
    }

    fn arb_mat() -> impl Strategy<Value = Mat2C> {
        (arb_complex(), arb_complex(), arb_complex(), arb_complex())
            .prop_map(|(a, b, c, d)| Mat2C::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn norm_is_submultiplicative(a in arb_mat(), b in arb_mat()) {
            let lhs = (a * b).operator_norm();
            let rhs = a.operator_norm() * b.operator_norm();
            prop_assert!(lhs <= rhs + 1e-9 * (1.0 + rhs));
        }

        #[test]
        fn pauli_round_trip(m in arb_mat()) {
            let back = Mat2C::from_pauli(m.pauli_coefficients());
            prop_assert!((back - m).max_abs() <= 1e-13 * (1.0 + m.max_abs()));
        }

        #[test]
        fn adjoint_is_an_involution(m in arb_mat()) {
            prop_assert_eq!(m.adjoint().adjoint(), m);
        }

        #[test]
        fn hermitian_iff_real_pauli_coefficients(m in arb_mat()) {
            // forward: symmetrized matrix has (numerically) real coefficients
            let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
            let max_im = h.pauli_coefficients().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            prop_assert!(max_im <= 1e-12 * (1.0 + h.max_abs()));
            // reverse: real coefficients build a Hermitian matrix
            let coeffs = m.pauli_coefficients().map(|z| Complex64::new(z.re, 0.0));
            let built = Mat2C::from_pauli(coeffs);
            prop_assert!(built.is_hermitian(1e-12 * (1.0 + built.max_abs())));
        }

        #[test]
        fn inverse_reproduces_identity(m in arb_mat()) {
            if let Ok(inv) = m.inverse() {
                let err = (m * inv - Mat2C::identity()).max_abs();
                prop_assert!(err <= 1e-8 * (1.0 + m.max_abs() * inv.max_abs()));
            }
        }
    }
}
