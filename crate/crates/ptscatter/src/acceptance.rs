//! The acceptance suite: nine end-to-end checks with pinned tolerances,
//! runnable as `ptscatter selftest` and as the `acceptance` integration test.

use num_complex::Complex64;
use std::time::Instant;

use crate::coeffs::{beta_from_gamma, scattering_coefficients};
use crate::imageset::{tk_from_boundary_data, traveling_wave_boundary_values};
use crate::inverse::{recover_metric, MetricSample};
use crate::mat2::Mat2C;
use crate::potential::{Potential, Segment};
use crate::propagate::{transfer_matrix, transfer_matrix_sampled, Wavenumber};
use crate::smatrix::{smatrix_from_coeffs, smatrix_grid, GridSpec, Route, SampleStatus};
use crate::verify::{
    check_contraction, check_hermitian_analyticity, check_metric_relations, check_pt_relation,
    check_unitarity,
};

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} {} — {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Run all criteria in order.
pub fn run_all() -> Vec<CriterionReport> {
    vec![
        point_interaction_constant_smatrix(),
        singular_coupling(),
        metric_recovery_identity(),
        free_potential_continuation(),
        route_equivalence(),
        self_adjoint_properties(),
        pt_relation(),
        propagation_correctness(),
        image_set_symmetries(),
    ]
}

/// The shared 20×20 grid: Re k in [−2, 2] avoiding 0, Im k in (0, 2].
fn standard_grid() -> GridSpec {
    GridSpec::new(-2.0, 2.0, 20, 0.1, 2.0, 20).unwrap()
}

fn square_well() -> Potential {
    Potential::piecewise_constant(
        1.0,
        vec![Segment {
            lo: -0.5,
            hi: 0.5,
            value: Complex64::new(2.0, 0.0),
        }],
    )
    .unwrap()
}

fn pt_well() -> Potential {
    Potential::piecewise_constant(
        1.0,
        vec![
            Segment {
                lo: -0.5,
                hi: 0.0,
                value: Complex64::new(0.0, -1.5),
            },
            Segment {
                lo: 0.0,
                hi: 0.5,
                value: Complex64::new(0.0, 1.5),
            },
        ],
    )
    .unwrap()
}

/// Wavenumbers of the standard grid with Re k > 0, paired with their mirrors.
fn standard_pairs() -> Vec<Wavenumber> {
    standard_grid()
        .points()
        .into_iter()
        .filter(|k| k.re > 0.0)
        .map(|k| Wavenumber::new(k).unwrap())
        .collect()
}

fn s_of(q: &Potential, k: Wavenumber) -> Option<Mat2C> {
    scattering_coefficients(q, k)
        .ok()
        .map(|c| smatrix_from_coeffs(&c))
}

/// Criterion 1: the γ = 1 point interaction has the constant S-matrix
/// −((4i/3, 5/3), (5/3, −4i/3)) on the whole grid, to 1e−10 via the
/// coefficient route and 1e−8 via the T_k route, in under a second.
fn point_interaction_constant_smatrix() -> CriterionReport {
    let start = Instant::now();
    let q = Potential::point_interaction(1.0).unwrap();
    let expected = Mat2C::new(
        Complex64::new(0.0, -4.0 / 3.0),
        Complex64::new(-5.0 / 3.0, 0.0),
        Complex64::new(-5.0 / 3.0, 0.0),
        Complex64::new(0.0, 4.0 / 3.0),
    );
    let coeff_samples = smatrix_grid(&q, &standard_grid(), Route::Coeffs);
    let tk_samples = smatrix_grid(&q, &standard_grid(), Route::Tk);
    let mut worst_coeffs: f64 = 0.0;
    let mut worst_tk: f64 = 0.0;
    let mut ok_count = 0usize;
    for (c, t) in coeff_samples.iter().zip(&tk_samples) {
        if c.status == SampleStatus::Ok {
            worst_coeffs = worst_coeffs.max((c.s.unwrap() - expected).operator_norm());
            ok_count += 1;
        }
        if t.status == SampleStatus::Ok {
            worst_tk = worst_tk.max((t.s.unwrap() - expected).operator_norm());
        }
    }
    let elapsed = start.elapsed();
    let passed =
        ok_count > 0 && worst_coeffs <= 1e-10 && worst_tk <= 1e-8 && elapsed.as_secs_f64() < 1.0;
    CriterionReport {
        name: "point-interaction constant S-matrix (gamma = 1)",
        passed,
        detail: format!(
            "{ok_count}/400 ok; coeff route max dev {worst_coeffs:.2e} (tol 1e-10), T_k route {worst_tk:.2e} (tol 1e-8), {:.0} ms",
            elapsed.as_secs_f64() * 1e3
        ),
    }
}

/// Criterion 2: γ = ±2 yields a singular status at every grid point and
/// never a finite S value.
fn singular_coupling() -> CriterionReport {
    let mut all_singular = true;
    let mut detail = String::new();
    for gamma in [2.0, -2.0] {
        let q = Potential::point_interaction(gamma).unwrap();
        let samples = smatrix_grid(&q, &standard_grid(), Route::Both);
        let bad = samples
            .iter()
            .filter(|s| s.status == SampleStatus::Ok || s.s.is_some())
            .count();
        all_singular &= bad == 0;
        detail.push_str(&format!("gamma={gamma}: {bad}/400 non-singular; "));
    }
    CriterionReport {
        name: "singular coupling gamma = +-2",
        passed: all_singular,
        detail,
    }
}

/// Criterion 3: metric recovery over γ ∈ {−1.5, −0.5, 0.5, 1, 1.5} returns
/// tanh χ = sin β to 1e−8 and the recovered e^Q passes the metric relations
/// (intertwining ≤ 1e−10, min eigenvalue ≥ −1e−10), in under a second.
fn metric_recovery_identity() -> CriterionReport {
    let start = Instant::now();
    let mut worst_identity: f64 = 0.0;
    let mut worst_intertwining: f64 = 0.0;
    let mut worst_min_eig: f64 = f64::INFINITY;
    let mut passed = true;
    for gamma in [-1.5, -0.5, 0.5, 1.0, 1.5] {
        let q = Potential::point_interaction(gamma).unwrap();
        let samples: Vec<MetricSample> = standard_pairs()
            .into_iter()
            .filter_map(|k| {
                let s_k = s_of(&q, k)?;
                let s_m = s_of(&q, k.mirror())?;
                Some((k, s_k, s_m))
            })
            .collect();
        let est = match recover_metric(&samples) {
            Ok(est) => est,
            Err(_) => {
                passed = false;
                continue;
            }
        };
        let sin_beta = beta_from_gamma(gamma).sin();
        worst_identity = worst_identity.max((est.chi.tanh() - sin_beta).abs());
        for (_, s_k, s_m) in &samples {
            match check_metric_relations(s_k, s_m, &est.e_q) {
                Ok((intertwining, min_eig)) => {
                    worst_intertwining = worst_intertwining.max(intertwining);
                    worst_min_eig = worst_min_eig.min(min_eig);
                }
                Err(_) => passed = false,
            }
        }
    }
    let elapsed = start.elapsed();
    passed = passed
        && worst_identity <= 1e-8
        && worst_intertwining <= 1e-10
        && worst_min_eig >= -1e-10
        && elapsed.as_secs_f64() < 1.0;
    CriterionReport {
        name: "metric recovery identity tanh(chi) = sin(beta)",
        passed,
        detail: format!(
            "max |tanh chi - sin beta| {worst_identity:.2e} (tol 1e-8), intertwining {worst_intertwining:.2e} (tol 1e-10), min eig {worst_min_eig:.2e} (tol -1e-10), {:.0} ms",
            elapsed.as_secs_f64() * 1e3
        ),
    }
}

/// Criterion 4: the free potential continues to S(k) = −e^{2ikρ}σ₁ for
/// ρ ∈ {0, 0.5, 1}, both routes, to 1e−10. This pins the diagonal
/// correction term (k−k̄)/(2k).
fn free_potential_continuation() -> CriterionReport {
    let mut worst: f64 = 0.0;
    let mut all_ok = true;
    for rho in [0.0, 0.5, 1.0] {
        let q = Potential::free(rho).unwrap();
        for route in [Route::Coeffs, Route::Tk] {
            for s in smatrix_grid(&q, &standard_grid(), route) {
                if s.status != SampleStatus::Ok {
                    all_ok = false;
                    continue;
                }
                let expected = Mat2C::sigma_x() * (-(Complex64::new(0.0, 2.0 * rho) * s.k).exp());
                worst = worst.max((s.s.unwrap() - expected).operator_norm());
            }
        }
    }
    CriterionReport {
        name: "free-potential analytic continuation S = -e^(2ik rho) sigma_x",
        passed: all_ok && worst <= 1e-10,
        detail: format!("max deviation {worst:.2e} (tol 1e-10), both routes, rho in {{0, 0.5, 1}}"),
    }
}

/// Criterion 5: coefficient and T_k routes agree to 1e−8 at every ok point
/// for the free potential, square well, point interaction, and PT well.
fn route_equivalence() -> CriterionReport {
    let potentials: Vec<(&str, Potential)> = vec![
        ("free", Potential::free(1.0).unwrap()),
        ("square well", square_well()),
        ("point gamma=1", Potential::point_interaction(1.0).unwrap()),
        ("PT well", pt_well()),
    ];
    let mut worst: f64 = 0.0;
    let mut ok_total = 0usize;
    for (_, q) in &potentials {
        for s in smatrix_grid(q, &standard_grid(), Route::Both) {
            if s.status == SampleStatus::Ok {
                worst = worst.max(s.route_disagreement.unwrap());
                ok_total += 1;
            }
        }
    }
    CriterionReport {
        name: "route equivalence coeffs vs T_k",
        passed: ok_total > 0 && worst <= 1e-8,
        detail: format!("max disagreement {worst:.2e} over {ok_total} ok points (tol 1e-8)"),
    }
}

/// Criterion 6: the real nonnegative well is a contraction on the grid
/// (norm ≤ 1 + 1e−10), satisfies S(−k̄) = S*(k) to 1e−8, and is unitary on
/// the real axis to 1e−8.
fn self_adjoint_properties() -> CriterionReport {
    let q = square_well();
    let mut worst_contraction: f64 = 0.0;
    let mut worst_hermitian: f64 = 0.0;
    let mut worst_unitarity: f64 = 0.0;
    let mut complete = true;

    for k in standard_pairs() {
        match (s_of(&q, k), s_of(&q, k.mirror())) {
            (Some(s_k), Some(s_m)) => {
                worst_contraction = worst_contraction
                    .max(check_contraction(&s_k))
                    .max(check_contraction(&s_m));
                worst_hermitian = worst_hermitian.max(check_hermitian_analyticity(&s_k, &s_m));
            }
            _ => complete = false,
        }
    }
    for i in 0..20 {
        let re = 0.1 + 1.9 * i as f64 / 19.0;
        for r in [re, -re] {
            match s_of(&q, Wavenumber::from_parts(r, 0.0).unwrap()) {
                Some(s) => worst_unitarity = worst_unitarity.max(check_unitarity(&s)),
                None => complete = false,
            }
        }
    }
    CriterionReport {
        name: "self-adjoint case: contraction, Hermitian analyticity, unitarity",
        passed: complete
            && worst_contraction <= 1e-10
            && worst_hermitian <= 1e-8
            && worst_unitarity <= 1e-8,
        detail: format!(
            "contraction excess {worst_contraction:.2e} (tol 1e-10), hermitian {worst_hermitian:.2e} (tol 1e-8), unitarity {worst_unitarity:.2e} (tol 1e-8)"
        ),
    }
}

/// Criterion 7: PT covariance S(k) = σ₁ conj(S(−k̄)) σ₁ to 1e−8 for the PT
/// well and the point interaction.
fn pt_relation() -> CriterionReport {
    let potentials: Vec<(&str, Potential)> = vec![
        ("PT well", pt_well()),
        ("point gamma=1", Potential::point_interaction(1.0).unwrap()),
    ];
    let mut worst: f64 = 0.0;
    let mut pairs = 0usize;
    for (_, q) in &potentials {
        for k in standard_pairs() {
            if let (Some(s_k), Some(s_m)) = (s_of(q, k), s_of(q, k.mirror())) {
                worst = worst.max(check_pt_relation(&s_k, &s_m));
                pairs += 1;
            }
        }
    }
    CriterionReport {
        name: "PT relation S(k) = sigma_x conj(S(-k̄)) sigma_x",
        passed: pairs > 0 && worst <= 1e-8,
        detail: format!("max residual {worst:.2e} over {pairs} pairs (tol 1e-8)"),
    }
}

/// Criterion 8: det M = 1 to 1e−10 across all families and the grid, and the
/// sampled integrator converges at order ≥ 1.9 against a 10⁵-step reference.
fn propagation_correctness() -> CriterionReport {
    let potentials = vec![
        Potential::free(1.0).unwrap(),
        square_well(),
        pt_well(),
        Potential::point_interaction(1.0).unwrap(),
        Potential::point_interaction_with_window(0.7, 0.5).unwrap(),
    ];
    let mut worst_det: f64 = 0.0;
    for q in &potentials {
        for k in standard_grid().points() {
            let k = match Wavenumber::new(k) {
                Ok(k) => k,
                Err(_) => continue,
            };
            if let Ok(m) = transfer_matrix(q, k) {
                let scale = m.max_abs().powi(2).max(1.0);
                worst_det = worst_det.max((m.det() - Complex64::new(1.0, 0.0)).norm() / scale);
            }
        }
    }

    // smooth complex bump sampled on a dense grid; reference at 1e5 steps
    let n = 100_001;
    let values: Vec<Complex64> = (0..n)
        .map(|i| {
            let x = -1.0 + 2.0 * i as f64 / (n - 1) as f64;
            let bump = (std::f64::consts::FRAC_PI_2 * x).cos().powi(2);
            Complex64::new(1.5 * bump, 2.0 * bump * (std::f64::consts::PI * x).sin())
        })
        .collect();
    let k = Wavenumber::from_parts(1.3, 0.6).unwrap();
    let reference = transfer_matrix_sampled(1.0, &values, k, 100_000).unwrap();
    let err_coarse = (transfer_matrix_sampled(1.0, &values, k, 64).unwrap() - reference).max_abs();
    let err_fine = (transfer_matrix_sampled(1.0, &values, k, 128).unwrap() - reference).max_abs();
    let order = (err_coarse / err_fine).log2();

    CriterionReport {
        name: "propagation: det M = 1 and order-2 sampled integrator",
        passed: worst_det <= 1e-10 && order >= 1.9,
        detail: format!(
            "max relative det defect {worst_det:.2e} (tol 1e-10), measured order {order:.3} (need >= 1.9)"
        ),
    }
}

/// Criterion 9: image-set symmetries — T_k* = T_{−k̄} for the real well and
/// σ₁ conj(T_k) σ₁ = T_{−k̄} for the PT-symmetric cases, both to 1e−8.
fn image_set_symmetries() -> CriterionReport {
    let tk_of = |q: &Potential, k: Wavenumber| -> Option<Mat2C> {
        let coeffs = scattering_coefficients(q, k).ok()?;
        let bd = traveling_wave_boundary_values(&coeffs);
        Some(tk_from_boundary_data(&bd, k).ok()?.tk)
    };

    let well = square_well();
    let mut worst_adjoint: f64 = 0.0;
    for k in standard_pairs() {
        if let (Some(t_k), Some(t_m)) = (tk_of(&well, k), tk_of(&well, k.mirror())) {
            worst_adjoint = worst_adjoint.max((t_k.adjoint() - t_m).operator_norm());
        }
    }

    let sx = Mat2C::sigma_x();
    let mut worst_pt: f64 = 0.0;
    for q in [pt_well(), Potential::point_interaction(1.0).unwrap()] {
        for k in standard_pairs() {
            if let (Some(t_k), Some(t_m)) = (tk_of(&q, k), tk_of(&q, k.mirror())) {
                worst_pt = worst_pt.max((sx * t_k.conj() * sx - t_m).operator_norm());
            }
        }
    }
    CriterionReport {
        name: "image-set symmetries T_k* = T_(-k̄) and PT image relation",
        passed: worst_adjoint <= 1e-8 && worst_pt <= 1e-8,
        detail: format!(
            "adjoint relation {worst_adjoint:.2e}, PT image relation {worst_pt:.2e} (tol 1e-8)"
        ),
    }
}
