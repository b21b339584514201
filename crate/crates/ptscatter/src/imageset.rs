//! The image-set matrix T_k and its determinant.
//!
//! T_k encodes the boundary condition that carves the image-set operator out
//! of the adjoint: T_k (f(ρ)+f'(ρ), f(−ρ)−f'(−ρ))ᵀ = ½ (f(ρ), f(−ρ))ᵀ. Two
//! construction routes are provided: unambiguous linear algebra on traveling-
//! wave boundary data (primary), and the closed-form entries in terms of the
//! coefficients (validator). For complex k the closed form reads θ̄ as the
//! complex conjugate of θ = 1 + ik; cross-route agreement confirms that
//! choice empirically.

use num_complex::Complex64;
use std::f64::consts::SQRT_2;

use crate::coeffs::ScatteringCoefficients;
use crate::error::{Error, Result};
use crate::mat2::{Mat2C, SINGULARITY_THRESHOLD};
use crate::propagate::Wavenumber;

/// Boundary traces of one solution: values and derivatives at x = ±ρ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceValues {
    pub value_plus: Complex64,
    pub deriv_plus: Complex64,
    pub value_minus: Complex64,
    pub deriv_minus: Complex64,
}

/// Boundary traces of the two traveling-wave solutions f₁ (right incidence)
/// and f₂ (left incidence).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryData {
    pub rho: f64,
    pub f1: TraceValues,
    pub f2: TraceValues,
}

/// The 2×2 image-set matrix at one wavenumber, with the determinant that
/// controls its existence and the defect of the boundary condition it was
/// built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TkMatrix {
    pub k: Wavenumber,
    pub tk: Mat2C,
    pub delta: Complex64,
    pub bc_residual: f64,
}

/// Evaluate the traveling-wave forms and their x-derivatives at ±ρ.
///
/// f₁ = e^{−ik̄x} + R^r e^{ikx} (x ≥ ρ), T^r e^{−ikx} (x ≤ −ρ);
/// f₂ = T^l e^{ikx} (x ≥ ρ), e^{ik̄x} + R^l e^{−ikx} (x ≤ −ρ).
pub fn traveling_wave_boundary_values(c: &ScatteringCoefficients) -> BoundaryData {
    let k = c.k.value();
    let kb = k.conj();
    let i = Complex64::new(0.0, 1.0);
    let rho = c.rho;
    let ep = (i * k * rho).exp();
    let em = (-i * kb * rho).exp();

    let f1 = TraceValues {
        value_plus: em + c.rr * ep,
        deriv_plus: -i * kb * em + i * k * c.rr * ep,
        value_minus: c.tr * ep,
        deriv_minus: -i * k * c.tr * ep,
    };
    let f2 = TraceValues {
        value_plus: c.tl * ep,
        deriv_plus: i * k * c.tl * ep,
        value_minus: em + c.rl * ep,
        deriv_minus: i * kb * em - i * k * c.rl * ep,
    };
    BoundaryData { rho, f1, f2 }
}

/// Invert [`traveling_wave_boundary_values`]: the map coefficients → traces
/// is an affine bijection, so the coefficients can be read back from the
/// values alone.
pub fn coefficients_from_boundary(bd: &BoundaryData, k: Wavenumber) -> ScatteringCoefficients {
    let kv = k.value();
    let kb = kv.conj();
    let i = Complex64::new(0.0, 1.0);
    let ep = (i * kv * bd.rho).exp();
    let em = (-i * kb * bd.rho).exp();
    ScatteringCoefficients {
        k,
        rho: bd.rho,
        rr: (bd.f1.value_plus - em) / ep,
        tr: bd.f1.value_minus / ep,
        tl: bd.f2.value_plus / ep,
        rl: (bd.f2.value_minus - em) / ep,
    }
}

/// Build T_k from boundary data: with columns a_j = (f_j(ρ)+f_j'(ρ),
/// f_j(−ρ)−f_j'(−ρ))ᵀ and F the matrix of values, T_k = ½ F A⁻¹.
///
/// `delta` is det A normalized by θ² e^{2ikρ}, which reproduces the
/// coefficient-determinant convention when the data come from traveling
/// waves.
pub fn tk_from_boundary_data(bd: &BoundaryData, k: Wavenumber) -> Result<TkMatrix> {
    let kv = k.value();
    let a = Mat2C::new(
        bd.f1.value_plus + bd.f1.deriv_plus,
        bd.f2.value_plus + bd.f2.deriv_plus,
        bd.f1.value_minus - bd.f1.deriv_minus,
        bd.f2.value_minus - bd.f2.deriv_minus,
    );
    let f = Mat2C::new(
        bd.f1.value_plus,
        bd.f2.value_plus,
        bd.f1.value_minus,
        bd.f2.value_minus,
    );
    let theta = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 1.0) * kv;
    let phase = (Complex64::new(0.0, 2.0) * kv * bd.rho).exp();
    let delta = a.det() / (theta * theta * phase);

    let a_inv = a.inverse().map_err(|_| Error::SingularImageSet {
        k: kv,
        delta_magnitude: delta.norm(),
    })?;
    let tk = f * a_inv * 0.5;

    let mut bc_residual: f64 = 0.0;
    for (col_a, col_f) in [
        ([a.a11, a.a21], [f.a11, f.a21]),
        ([a.a12, a.a22], [f.a12, f.a22]),
    ] {
        let lhs = tk.mul_vec(col_a);
        let r0 = lhs[0] - 0.5 * col_f[0];
        let r1 = lhs[1] - 0.5 * col_f[1];
        bc_residual = bc_residual.max((r0.norm_sqr() + r1.norm_sqr()).sqrt());
    }

    Ok(TkMatrix {
        k,
        tk,
        delta,
        bc_residual,
    })
}

/// The determinant Δ_k = det((R^r + e^{i(α+φ)}, T^r), (T^l, R^l + e^{i(α+φ)})),
/// with e^{iα} = θ̄/θ, θ = 1+ik, and e^{iφ} = e^{−2iρ·Re k}.
pub fn image_set_determinant(c: &ScatteringCoefficients) -> Complex64 {
    let (_, eaf) = alpha_phi_factors(c);
    (c.rr + eaf) * (c.rl + eaf) - c.tr * c.tl
}

fn alpha_phi_factors(c: &ScatteringCoefficients) -> (Complex64, Complex64) {
    let k = c.k.value();
    let theta = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 1.0) * k;
    let eia = theta.conj() / theta;
    let eif = Complex64::new(0.0, -2.0 * c.rho * k.re).exp();
    (eif, eia * eif)
}

/// Closed-form T_k entries in terms of the coefficients; validates the
/// boundary-data route.
pub fn tk_closed_form(c: &ScatteringCoefficients) -> Result<TkMatrix> {
    let k = c.k.value();
    let theta = Complex64::new(1.0, 0.0) + Complex64::new(0.0, 1.0) * k;
    let (eif, eaf) = alpha_phi_factors(c);
    let eia = theta.conj() / theta;
    let delta = image_set_determinant(c);

    let scale = [c.rr + eaf, c.tr, c.tl, c.rl + eaf]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if delta.norm() <= SINGULARITY_THRESHOLD * 1f64.max(scale * scale) {
        return Err(Error::SingularImageSet {
            k,
            delta_magnitude: delta.norm(),
        });
    }

    let g = eif * (eia - Complex64::new(1.0, 0.0));
    let denom = 2.0 * theta * delta;
    let tk = Mat2C::new(
        (delta - g * (c.rl + eaf)) / denom,
        c.tl * g / denom,
        c.tr * g / denom,
        (delta - g * (c.rr + eaf)) / denom,
    );

    // self-check against the boundary condition the entries came from
    let bd = traveling_wave_boundary_values(c);
    let mut bc_residual: f64 = 0.0;
    for tv in [bd.f1, bd.f2] {
        let col_a = [
            tv.value_plus + tv.deriv_plus,
            tv.value_minus - tv.deriv_minus,
        ];
        let lhs = tk.mul_vec(col_a);
        let r0 = lhs[0] - 0.5 * tv.value_plus;
        let r1 = lhs[1] - 0.5 * tv.value_minus;
        bc_residual = bc_residual.max((r0.norm_sqr() + r1.norm_sqr()).sqrt());
    }

    Ok(TkMatrix {
        k: c.k,
        tk,
        delta,
        bc_residual,
    })
}

/// Boundary-triplet coordinates of boundary traces in the (e₊, e₋) basis:
/// γ₀ = (√2/2)(f(ρ), f(−ρ)), γ₁ = √2 (f(ρ)+f'(ρ), f(−ρ)−f'(−ρ)).
/// Members of the image-set domain satisfy T_k γ₁ = γ₀.
pub fn boundary_triplet_coords(
    value_plus: Complex64,
    value_minus: Complex64,
    deriv_plus: Complex64,
    deriv_minus: Complex64,
) -> ([Complex64; 2], [Complex64; 2]) {
    let gamma0 = [value_plus * (SQRT_2 / 2.0), value_minus * (SQRT_2 / 2.0)];
    let gamma1 = [
        (value_plus + deriv_plus) * SQRT_2,
        (value_minus - deriv_minus) * SQRT_2,
    ];
    (gamma0, gamma1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{point_interaction_coefficients, scattering_coefficients};
    use crate::potential::{Potential, Segment};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kn(re: f64, im: f64) -> Wavenumber {
        Wavenumber::from_parts(re, im).unwrap()
    }

    const GRID: [(f64, f64); 5] = [(0.7, 0.2), (1.0, 1.0), (-1.3, 0.4), (2.0, 0.3), (0.31, 1.7)];

    fn test_potentials() -> Vec<Potential> {
        vec![
            Potential::free(1.0).unwrap(),
            Potential::free(0.0).unwrap(),
            Potential::point_interaction(1.0).unwrap(),
            Potential::piecewise_constant(
                1.0,
                vec![Segment {
                    lo: -0.5,
                    hi: 0.5,
                    value: c(2.0, 0.0),
                }],
            )
            .unwrap(),
            Potential::piecewise_constant(
                1.0,
                vec![
                    Segment {
                        lo: -0.5,
                        hi: 0.0,
                        value: c(0.0, -1.5),
                    },
                    Segment {
                        lo: 0.0,
                        hi: 0.5,
                        value: c(0.0, 1.5),
                    },
                ],
            )
            .unwrap(),
        ]
    }

    #[test]
    fn boundary_values_free_real_k() {
        // Free, rho = 0, real k: R = 0, T = 1, so f1(0±) = 1, f1'(0+) = -ik.
        let coeffs = scattering_coefficients(&Potential::free(0.0).unwrap(), kn(1.0, 0.0)).unwrap();
        let bd = traveling_wave_boundary_values(&coeffs);
        assert!((bd.f1.value_plus - c(1.0, 0.0)).norm() < 1e-14);
        assert!((bd.f1.value_minus - c(1.0, 0.0)).norm() < 1e-14);
        assert!((bd.f1.deriv_plus - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn boundary_values_point_interaction_real_k() {
        // gamma = 1, k = 1: f1(0+) = 1 + 4i/3, f1(0-) = 5/3
        let coeffs = point_interaction_coefficients(1.0, kn(1.0, 0.0)).unwrap();
        let bd = traveling_wave_boundary_values(&coeffs);
        assert!((bd.f1.value_plus - c(1.0, 4.0 / 3.0)).norm() < 1e-14);
        assert!((bd.f1.value_minus - c(5.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn boundary_values_invert_exactly() {
        for q in test_potentials() {
            for &(re, im) in &GRID {
                let k = kn(re, im);
                let coeffs = scattering_coefficients(&q, k).unwrap();
                let bd = traveling_wave_boundary_values(&coeffs);
                let back = coefficients_from_boundary(&bd, k);
                for (a, b) in [
                    (back.rl, coeffs.rl),
                    (back.rr, coeffs.rr),
                    (back.tl, coeffs.tl),
                    (back.tr, coeffs.tr),
                ] {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn cross_route_agreement() {
        // 20x20 grid in the open quadrant pair, avoiding small determinants
        let mut grid_points = Vec::new();
        for j in 0..20 {
            for i in 0..20 {
                let re = -2.0 + 4.0 * i as f64 / 19.0;
                let im = 0.1 + 1.9 * j as f64 / 19.0;
                grid_points.push((re, im));
            }
        }
        for q in test_potentials() {
            for &(re, im) in &grid_points {
                let coeffs = scattering_coefficients(&q, kn(re, im)).unwrap();
                let bd = traveling_wave_boundary_values(&coeffs);
                let primary = tk_from_boundary_data(&bd, coeffs.k).unwrap();
                if primary.delta.norm() < 1e-6 {
                    continue;
                }
                let closed = tk_closed_form(&coeffs).unwrap();
                assert!(
                    (primary.tk - closed.tk).max_abs() < 1e-10,
                    "{q:?} at k={re}+{im}i"
                );
                assert!(
                    (primary.delta - closed.delta).norm() < 1e-10 * closed.delta.norm().max(1.0)
                );
                assert!(primary.bc_residual < 1e-10);
                assert!(closed.bc_residual < 1e-10);
            }
        }
    }

    #[test]
    fn frozen_tk_gamma_one() {
        // gamma = 1, k = 1+i: T_k = ((1/4 + i/3, 5/12), (5/12, 1/4 - i/3)),
        // delta = 2 + 2i (mpmath reference).
        let coeffs = point_interaction_coefficients(1.0, kn(1.0, 1.0)).unwrap();
        let bd = traveling_wave_boundary_values(&coeffs);
        let t = tk_from_boundary_data(&bd, coeffs.k).unwrap();
        let expected = Mat2C::new(
            c(0.25, 1.0 / 3.0),
            c(5.0 / 12.0, 0.0),
            c(5.0 / 12.0, 0.0),
            c(0.25, -1.0 / 3.0),
        );
        assert!((t.tk - expected).max_abs() < 1e-13);
        assert!((t.delta - c(2.0, 2.0)).norm() < 1e-13);
        assert!(t.bc_residual <= 1e-10);
    }

    #[test]
    fn construction_self_check_stays_tight() {
        let coeffs = point_interaction_coefficients(1.0, kn(1.0, 0.5)).unwrap();
        let bd = traveling_wave_boundary_values(&coeffs);
        let t = tk_from_boundary_data(&bd, coeffs.k).unwrap();
        assert!(t.bc_residual <= 1e-10);
    }

    #[test]
    fn closed_form_rejects_vanishing_determinant() {
        // rr = rl = 1 - e^{i(alpha+phi)}, tr = tl = 1 makes delta = 0 exactly
        let k = kn(0.7, 0.2);
        let theta = c(1.0, 0.0) + c(0.0, 1.0) * k.value();
        let eaf = theta.conj() / theta;
        let coeffs = ScatteringCoefficients {
            k,
            rho: 0.0,
            rl: c(1.0, 0.0) - eaf,
            rr: c(1.0, 0.0) - eaf,
            tl: c(1.0, 0.0),
            tr: c(1.0, 0.0),
        };
        assert!(matches!(
            tk_closed_form(&coeffs),
            Err(Error::SingularImageSet { .. })
        ));
    }

    #[test]
    fn determinant_examples() {
        // free, rho = 0, real k = 1: delta = e^{2i alpha} - 1 with
        // e^{i alpha} = (1-i)/(1+i) = -i, so delta = -2.
        let coeffs = scattering_coefficients(&Potential::free(0.0).unwrap(), kn(1.0, 0.0)).unwrap();
        assert!((image_set_determinant(&coeffs) - c(-2.0, 0.0)).norm() < 1e-13);

        // all-zero coefficients: delta = e^{2i(alpha+phi)}
        let zero = ScatteringCoefficients {
            k: kn(0.7, 0.2),
            rho: 0.5,
            rl: c(0.0, 0.0),
            rr: c(0.0, 0.0),
            tl: c(0.0, 0.0),
            tr: c(0.0, 0.0),
        };
        let theta = c(1.0, 0.0) + c(0.0, 1.0) * zero.k.value();
        let eaf = theta.conj() / theta * c(0.0, -2.0 * 0.5 * 0.7).exp();
        assert!((image_set_determinant(&zero) - eaf * eaf).norm() < 1e-14);

        // frozen: free rho = 0.5, k = 0.7+0.2i
        let coeffs = scattering_coefficients(&Potential::free(0.5).unwrap(), kn(0.7, 0.2)).unwrap();
        let delta = image_set_determinant(&coeffs);
        assert!((delta - c(-0.9351535857788729, 1.852586691483953)).norm() < 1e-12);
    }

    #[test]
    fn determinant_is_coupling_independent_for_point_interactions() {
        // The 1/cos(beta) factors cancel exactly in the determinant:
        // delta = -(|k|/k)^2 - 2i Im(k) e^{i alpha}/k + e^{2i alpha}. The
        // coefficients themselves do diverge as |gamma| -> 2.
        let k = kn(1.0, 0.5);
        let mut coeff_mag = 0.0;
        for gamma in [0.5, 1.5, 1.9, 1.99, 1.999] {
            let coeffs = point_interaction_coefficients(gamma, k).unwrap();
            let mag = image_set_determinant(&coeffs).norm();
            assert!((mag - 2.8621670112).abs() < 1e-9, "gamma={gamma}: {mag}");
            assert!(coeffs.tr.norm() > coeff_mag, "gamma={gamma}");
            coeff_mag = coeffs.tr.norm();
        }
        assert!(coeff_mag > 1e3);
    }

    #[test]
    fn degenerate_boundary_data_is_rejected() {
        // a1 parallel to a2: rank-deficient matching matrix
        let tv = TraceValues {
            value_plus: c(1.0, 0.0),
            deriv_plus: c(0.5, 0.0),
            value_minus: c(2.0, 0.0),
            deriv_minus: c(-1.0, 0.0),
        };
        let bd = BoundaryData {
            rho: 0.0,
            f1: tv,
            f2: tv,
        };
        assert!(matches!(
            tk_from_boundary_data(&bd, kn(1.0, 0.5)),
            Err(Error::SingularImageSet { .. })
        ));
    }

    #[test]
    fn triplet_coords_examples() {
        let (g0, g1) = boundary_triplet_coords(c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(g0[0].norm() + g0[1].norm() + g1[0].norm() + g1[1].norm() < 1e-15);

        let (g0, g1) = boundary_triplet_coords(c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!(g1[0].norm() < 1e-15 && g1[1].norm() < 1e-15);
        assert!((g0[0] - c(SQRT_2 / 2.0, 0.0)).norm() < 1e-15);
        assert!(g0[1].norm() < 1e-15);
    }

    #[test]
    fn triplet_relation_holds_for_image_set_members() {
        let coeffs = point_interaction_coefficients(1.0, kn(1.0, 0.0)).unwrap();
        let bd = traveling_wave_boundary_values(&coeffs);
        let t = tk_from_boundary_data(&bd, coeffs.k).unwrap();
        for tv in [bd.f1, bd.f2] {
            let (g0, g1) = boundary_triplet_coords(
                tv.value_plus,
                tv.value_minus,
                tv.deriv_plus,
                tv.deriv_minus,
            );
            let lhs = t.tk.mul_vec(g1);
            let res = ((lhs[0] - g0[0]).norm_sqr() + (lhs[1] - g0[1]).norm_sqr()).sqrt();
            assert!(res < 1e-10);
        }
    }

    #[test]
    fn adjoint_and_dissipativity_for_real_well() {
        let q = Potential::piecewise_constant(
            1.0,
            vec![Segment {
                lo: -0.5,
                hi: 0.5,
                value: c(2.0, 0.0),
            }],
        )
        .unwrap();
        for &(re, im) in &[(0.8, 0.4), (1.5, 0.9), (0.3, 1.2)] {
            let k = kn(re, im);
            let t_k = {
                let coeffs = scattering_coefficients(&q, k).unwrap();
                tk_from_boundary_data(&traveling_wave_boundary_values(&coeffs), k).unwrap()
            };
            let t_mirror = {
                let km = k.mirror();
                let coeffs = scattering_coefficients(&q, km).unwrap();
                tk_from_boundary_data(&traveling_wave_boundary_values(&coeffs), km).unwrap()
            };
            assert!((t_k.tk.adjoint() - t_mirror.tk).max_abs() < 1e-8);

            // dissipativity for Re k > 0: Im <T_k v, v> >= 0
            for vs in [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.3, -0.4), c(0.9, 1.1)],
                [c(0.0, 1.0), c(1.0, 0.0)],
            ] {
                let tv = t_k.tk.mul_vec(vs);
                let inner = tv[0] * vs[0].conj() + tv[1] * vs[1].conj();
                assert!(inner.im >= -1e-10, "k={re}+{im}i v={vs:?}");
            }
        }
    }

    #[test]
    fn pt_image_relation_for_pt_potentials() {
        let potentials = [
            Potential::piecewise_constant(
                1.0,
                vec![
                    Segment {
                        lo: -0.5,
                        hi: 0.0,
                        value: c(0.0, -1.5),
                    },
                    Segment {
                        lo: 0.0,
                        hi: 0.5,
                        value: c(0.0, 1.5),
                    },
                ],
            )
            .unwrap(),
            Potential::point_interaction(1.0).unwrap(),
        ];
        let sx = Mat2C::sigma_x();
        for q in &potentials {
            for &(re, im) in &[(0.8, 0.4), (1.5, 0.9)] {
                let k = kn(re, im);
                let tk = |kk: Wavenumber| {
                    let coeffs = scattering_coefficients(q, kk).unwrap();
                    tk_from_boundary_data(&traveling_wave_boundary_values(&coeffs), kk)
                        .unwrap()
                        .tk
                };
                let lhs = sx * tk(k).conj() * sx;
                assert!((lhs - tk(k.mirror())).max_abs() < 1e-8);
            }
        }
    }
}
