//! Compactly supported potentials q(x) with support radius ρ, plus the
//! PT-symmetry residual sup |q(x) − conj(q(−x))|.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One constant piece of a piecewise potential, q = `value` on [lo, hi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub value: Complex64,
}

/// A potential supported inside (−ρ, ρ).
///
/// `PointInteraction` is the singular zero-range model with transmission
/// condition f(0+) = e^{iβ} f(0−), f'(0+) = e^{−iβ} f'(0−); its support is {0}
/// but an evaluation window ρ ≥ 0 may still be requested.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Free { rho: f64 },
    PointInteraction { gamma: f64, rho: f64 },
    PiecewiseConstant { rho: f64, segments: Vec<Segment> },
    Sampled { rho: f64, values: Vec<Complex64> },
}

impl Potential {
    pub fn free(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Ok(Potential::Free { rho })
    }

    pub fn point_interaction(gamma: f64) -> Result<Self> {
        Self::point_interaction_with_window(gamma, 0.0)
    }

    pub fn point_interaction_with_window(gamma: f64, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        if !gamma.is_finite() {
            return Err(Error::InvalidPotential("gamma must be finite".into()));
        }
        Ok(Potential::PointInteraction { gamma, rho })
    }

    pub fn piecewise_constant(rho: f64, segments: Vec<Segment>) -> Result<Self> {
        check_rho(rho)?;
        let mut prev_hi = -rho;
        for s in &segments {
            if !(s.lo.is_finite() && s.hi.is_finite())
                || !s.value.re.is_finite()
                || !s.value.im.is_finite()
            {
                return Err(Error::InvalidPotential(
                    "segment with non-finite data".into(),
                ));
            }
            if s.lo >= s.hi {
                return Err(Error::InvalidPotential(format!(
                    "segment [{}, {}] is empty or reversed",
                    s.lo, s.hi
                )));
            }
            if s.lo < -rho || s.hi > rho {
                return Err(Error::InvalidPotential(format!(
                    "segment [{}, {}] leaves the support window (-{rho}, {rho})",
                    s.lo, s.hi
                )));
            }
            if s.lo < prev_hi {
                return Err(Error::InvalidPotential(
                    "segments must be ordered and non-overlapping".into(),
                ));
            }
            prev_hi = s.hi;
        }
        Ok(Potential::PiecewiseConstant { rho, segments })
    }

    pub fn sampled(rho: f64, values: Vec<Complex64>) -> Result<Self> {
        check_rho(rho)?;
        if rho == 0.0 {
            return Err(Error::InvalidPotential(
                "sampled potential needs rho > 0".into(),
            ));
        }
        if values.len() < 2 {
            return Err(Error::InvalidPotential(
                "sampled potential needs at least 2 grid values".into(),
            ));
        }
        if values
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::InvalidPotential("non-finite sample value".into()));
        }
        Ok(Potential::Sampled { rho, values })
    }

    /// Support radius ρ.
    pub fn support_radius(&self) -> f64 {
        match self {
            Potential::Free { rho }
            | Potential::PointInteraction { rho, .. }
            | Potential::PiecewiseConstant { rho, .. }
            | Potential::Sampled { rho, .. } => *rho,
        }
    }

    /// Pointwise value of q(x); zero outside the support and zero everywhere
    /// for the distributional point interaction.
    pub fn value_at(&self, x: f64) -> Complex64 {
        match self {
            Potential::Free { .. } | Potential::PointInteraction { .. } => Complex64::new(0.0, 0.0),
            Potential::PiecewiseConstant { segments, .. } => segments
                .iter()
                .find(|s| s.lo <= x && x < s.hi)
                .map(|s| s.value)
                .unwrap_or_else(|| Complex64::new(0.0, 0.0)),
            Potential::Sampled { rho, values } => interpolate_samples(*rho, values, x),
        }
    }

    /// sup over sample points of |q(x) − conj(q(−x))|; zero exactly for a
    /// PT-symmetric potential.
    ///
    /// Piecewise potentials are probed at the midpoints and (± eps) endpoints
    /// of the partition merged with its reflection, which detects asymmetry
    /// exactly; uniform samples that land on a discontinuity are skipped.
    pub fn pt_symmetry_residual(&self, n: usize) -> f64 {
        assert!(n >= 2, "need at least 2 sample points");
        let rho = self.support_radius();
        match self {
            Potential::Free { .. } | Potential::PointInteraction { .. } => 0.0,
            Potential::PiecewiseConstant { segments, .. } => {
                let mut breaks: Vec<f64> = vec![-rho, rho];
                for s in segments {
                    breaks.extend_from_slice(&[s.lo, s.hi, -s.lo, -s.hi]);
                }
                breaks.retain(|b| b.abs() <= rho);
                breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
                breaks.dedup();

                let eps = 1e-9 * rho.max(1.0);
                let mut points: Vec<f64> = Vec::new();
                for w in breaks.windows(2) {
                    points.push(0.5 * (w[0] + w[1]));
                }
                for b in &breaks {
                    points.push(b + eps);
                    points.push(b - eps);
                }
                for i in 0..n {
                    let x = -rho + 2.0 * rho * i as f64 / (n - 1) as f64;
                    let near_break = breaks.iter().any(|b| (x - b).abs() < 2.0 * eps);
                    if !near_break {
                        points.push(x);
                    }
                }
                points.retain(|x| x.abs() <= rho);
                self.residual_at(&points)
            }
            Potential::Sampled { .. } => {
                let points: Vec<f64> = (0..n)
                    .map(|i| -rho + 2.0 * rho * i as f64 / (n - 1) as f64)
                    .collect();
                self.residual_at(&points)
            }
        }
    }

    fn residual_at(&self, points: &[f64]) -> f64 {
        points
            .iter()
            .map(|&x| (self.value_at(x) - self.value_at(-x).conj()).norm())
            .fold(0.0, f64::max)
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !rho.is_finite() || rho < 0.0 {
        return Err(Error::InvalidPotential(format!(
            "support radius must be finite and >= 0, got {rho}"
        )));
    }
    Ok(())
}

/// Linear interpolation on the uniform grid over [−ρ, ρ]; zero outside.
pub(crate) fn interpolate_samples(rho: f64, values: &[Complex64], x: f64) -> Complex64 {
    if x.abs() > rho {
        return Complex64::new(0.0, 0.0);
    }
    let n = values.len();
    let t = (x + rho) / (2.0 * rho) * (n - 1) as f64;
    let i = (t.floor() as usize).min(n - 2);
    let frac = t - i as f64;
    values[i] * (1.0 - frac) + values[i + 1] * frac
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn seg(lo: f64, hi: f64, re: f64, im: f64) -> Segment {
        Segment {
            lo,
            hi,
            value: c(re, im),
        }
    }

    #[test]
    fn support_radius_examples() {
        assert_eq!(Potential::free(2.0).unwrap().support_radius(), 2.0);
        assert_eq!(
            Potential::point_interaction(1.0).unwrap().support_radius(),
            0.0
        );
        let p = Potential::piecewise_constant(1.5, vec![seg(-1.0, 1.0, 1.0, 0.0)]).unwrap();
        assert_eq!(p.support_radius(), 1.5);
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(Potential::free(-1.0).is_err());
        assert!(Potential::free(f64::NAN).is_err());
        assert!(Potential::piecewise_constant(1.0, vec![seg(-2.0, 0.5, 1.0, 0.0)]).is_err());
        assert!(Potential::piecewise_constant(1.0, vec![seg(0.5, 0.2, 1.0, 0.0)]).is_err());
        assert!(Potential::piecewise_constant(
            1.0,
            vec![seg(-0.5, 0.5, 1.0, 0.0), seg(0.2, 0.8, 1.0, 0.0)]
        )
        .is_err());
        assert!(Potential::sampled(1.0, vec![c(1.0, 0.0)]).is_err());
        assert!(Potential::sampled(0.0, vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn pt_residual_free_and_point() {
        assert_eq!(Potential::free(1.0).unwrap().pt_symmetry_residual(16), 0.0);
        assert_eq!(
            Potential::point_interaction(3.0)
                .unwrap()
                .pt_symmetry_residual(16),
            0.0
        );
    }

    #[test]
    fn pt_residual_imaginary_odd_step_is_zero() {
        // q = i sgn(x) on (-1, 1): purely imaginary and odd, so PT-symmetric.
        let q = Potential::piecewise_constant(
            1.0,
            vec![seg(-1.0, 0.0, 0.0, -1.0), seg(0.0, 1.0, 0.0, 1.0)],
        )
        .unwrap();
        assert!(q.pt_symmetry_residual(33) < 1e-12);
    }

    #[test]
    fn pt_residual_one_sided_step_is_one() {
        let q = Potential::piecewise_constant(1.0, vec![seg(0.0, 1.0, 0.0, 1.0)]).unwrap();
        assert!((q.pt_symmetry_residual(16) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pt_residual_real_even_vs_skewed() {
        let even = Potential::piecewise_constant(1.0, vec![seg(-0.5, 0.5, 2.0, 0.0)]).unwrap();
        assert!(even.pt_symmetry_residual(50) < 1e-12);
        let skewed = Potential::piecewise_constant(1.0, vec![seg(-0.2, 0.6, 2.0, 0.0)]).unwrap();
        assert!(skewed.pt_symmetry_residual(50) > 0.1);
    }

    #[test]
    fn pt_residual_stable_under_refinement() {
        let q = Potential::piecewise_constant(1.0, vec![seg(0.0, 1.0, 0.0, 1.0)]).unwrap();
        let r1 = q.pt_symmetry_residual(8);
        let r2 = q.pt_symmetry_residual(800);
        assert!((r1 - r2).abs() < 1e-12);
    }

    #[test]
    fn sampled_pt_residual_uses_grid() {
        // PT-symmetric samples: q(x) = x*i (odd imaginary) on a uniform grid.
        let n = 21;
        let values: Vec<Complex64> = (0..n)
            .map(|i| {
                let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
                c(0.0, x)
            })
            .collect();
        let q = Potential::sampled(1.0, values).unwrap();
        assert!(q.pt_symmetry_residual(n) < 1e-12);

        let mut values2: Vec<Complex64> = vec![c(0.0, 0.0); n];
        values2[n - 1] = c(1.0, 0.0);
        values2[0] = c(-1.0, 0.0); // real odd: not PT-symmetric
        let q2 = Potential::sampled(1.0, values2).unwrap();
        assert!(q2.pt_symmetry_residual(n) > 1.0);
    }

    #[test]
    fn interpolation_hits_grid_values() {
        let values = vec![c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)];
        let q = Potential::sampled(1.0, values).unwrap();
        assert!((q.value_at(-1.0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((q.value_at(0.0) - c(2.0, 0.0)).norm() < 1e-15);
        assert!((q.value_at(0.5) - c(3.5, 0.0)).norm() < 1e-15);
        assert_eq!(q.value_at(1.5), c(0.0, 0.0));
    }
}
