//! S-matrix assembly by both routes, plus grid sweeps with per-point
//! singularity diagnostics and the CSV/JSON table formats.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::{self, Write};

use crate::coeffs::{scattering_coefficients, ScatteringCoefficients};
use crate::error::{Error, Result};
use crate::imageset::{tk_from_boundary_data, traveling_wave_boundary_values, TkMatrix};
use crate::mat2::Mat2C;
use crate::potential::Potential;
use crate::propagate::Wavenumber;

/// Which assembly to run per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Coeffs,
    Tk,
    Both,
}

/// Per-point outcome of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStatus {
    Ok,
    SingularDelta,
    SingularBracket,
    ExcludedAxis,
}

impl SampleStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SampleStatus::Ok => "ok",
            SampleStatus::SingularDelta => "singular_delta",
            SampleStatus::SingularBracket => "singular_bracket",
            SampleStatus::ExcludedAxis => "excluded_axis",
        }
    }
}

/// One grid point: the S value when it exists, the image-set determinant for
/// diagnostics, and the disagreement between routes when both ran.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrixSample {
    pub k: Complex64,
    pub s: Option<Mat2C>,
    pub delta: Option<Complex64>,
    pub route: Route,
    pub route_disagreement: Option<f64>,
    pub status: SampleStatus,
}

/// S(k) = [I − 2(1−ik)T_k][I − 2(1+ik)T_k]⁻¹.
pub fn smatrix_from_tk(t: &TkMatrix) -> Result<Mat2C> {
    let k = t.k.value();
    let i = Complex64::new(0.0, 1.0);
    let two = Complex64::new(2.0, 0.0);
    let left = Mat2C::identity() - t.tk * (two * (Complex64::new(1.0, 0.0) - i * k));
    let right = Mat2C::identity() - t.tk * (two * (Complex64::new(1.0, 0.0) + i * k));
    let right_inv = right
        .inverse()
        .map_err(|_| Error::SMatrixNonexistent { k })?;
    Ok(left * right_inv)
}

/// S(k) assembled from the coefficients:
/// −e^{2iρ·Re k} (k/Re k) ((R^r + c, T^l), (T^r, R^l + c)) with the diagonal
/// correction c = e^{−2iρ·Re k} (k−k̄)/(2k); on the real axis the direct
/// reduction −e^{2iρk} ((R^r, T^l), (T^r, R^l)).
///
/// Coefficients only exist off the imaginary axis, so no domain failure is
/// possible here.
pub fn smatrix_from_coeffs(c: &ScatteringCoefficients) -> Mat2C {
    let k = c.k.value();
    let rho = c.rho;
    if c.k.is_real_axis() {
        let pref = -(Complex64::new(0.0, 2.0 * rho) * k).exp();
        return Mat2C::new(c.rr, c.tl, c.tr, c.rl) * pref;
    }
    let kb = k.conj();
    let corr = Complex64::new(0.0, -2.0 * rho * k.re).exp() * (k - kb) / (2.0 * k);
    let pref = -Complex64::new(0.0, 2.0 * rho * k.re).exp() * k / k.re;
    Mat2C::new(c.rr + corr, c.tl, c.tr, c.rl + corr) * pref
}

/// Rectangular grid {re: [min, max, n], im: [min, max, m]}; points are
/// emitted row-major with the imaginary part as the row index, both axes
/// ascending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub re_count: usize,
    pub im_min: f64,
    pub im_max: f64,
    pub im_count: usize,
}

impl GridSpec {
    pub fn new(
        re_min: f64,
        re_max: f64,
        re_count: usize,
        im_min: f64,
        im_max: f64,
        im_count: usize,
    ) -> Result<Self> {
        let spec = GridSpec {
            re_min,
            re_max,
            re_count,
            im_min,
            im_max,
            im_count,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.re_min, self.re_max, self.im_min, self.im_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidPotential("grid bounds must be finite".into()));
        }
        if self.re_count == 0 || self.im_count == 0 {
            return Err(Error::InvalidPotential(
                "grid needs at least one point per axis".into(),
            ));
        }
        if self.re_min > self.re_max || self.im_min > self.im_max {
            return Err(Error::InvalidPotential(
                "grid bounds must be ordered".into(),
            ));
        }
        if self.im_min < 0.0 {
            return Err(Error::InvalidPotential(
                "grid must stay in Im k >= 0".into(),
            ));
        }
        const MAX_POINTS: usize = 10_000_000;
        if self.re_count.saturating_mul(self.im_count) > MAX_POINTS {
            return Err(Error::InvalidPotential(format!(
                "grid has more than {MAX_POINTS} points"
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.re_count * self.im_count);
        for j in 0..self.im_count {
            let im = linspace(self.im_min, self.im_max, self.im_count, j);
            for i in 0..self.re_count {
                let re = linspace(self.re_min, self.re_max, self.re_count, i);
                out.push(Complex64::new(re, im));
            }
        }
        out
    }
}

fn linspace(min: f64, max: f64, count: usize, index: usize) -> f64 {
    if count == 1 {
        min
    } else {
        min + (max - min) * index as f64 / (count - 1) as f64
    }
}

/// Evaluate one point; singular points become statuses, never aborts.
pub fn sample_point(q: &Potential, k: Complex64, route: Route) -> SMatrixSample {
    let excluded = SMatrixSample {
        k,
        s: None,
        delta: None,
        route,
        route_disagreement: None,
        status: SampleStatus::ExcludedAxis,
    };
    let wavenumber = match Wavenumber::new(k) {
        Ok(w) if w.in_c_plus_prime() => w,
        _ => return excluded,
    };
    let coeffs = match scattering_coefficients(q, wavenumber) {
        Ok(c) => c,
        Err(_) => {
            return SMatrixSample {
                k,
                s: None,
                delta: None,
                route,
                route_disagreement: None,
                status: SampleStatus::SingularDelta,
            }
        }
    };

    let tk_result = || -> Result<(Mat2C, Complex64)> {
        let bd = traveling_wave_boundary_values(&coeffs);
        let t = tk_from_boundary_data(&bd, wavenumber)?;
        let s = smatrix_from_tk(&t)?;
        Ok((s, t.delta))
    };

    match route {
        Route::Coeffs => {
            let s = smatrix_from_coeffs(&coeffs);
            SMatrixSample {
                k,
                s: Some(s),
                delta: Some(crate::imageset::image_set_determinant(&coeffs)),
                route,
                route_disagreement: None,
                status: SampleStatus::Ok,
            }
        }
        Route::Tk => match tk_result() {
            Ok((s, delta)) => SMatrixSample {
                k,
                s: Some(s),
                delta: Some(delta),
                route,
                route_disagreement: None,
                status: SampleStatus::Ok,
            },
            Err(e) => failure_sample(k, route, &e),
        },
        Route::Both => {
            let s_coeffs = smatrix_from_coeffs(&coeffs);
            match tk_result() {
                Ok((s_tk, delta)) => SMatrixSample {
                    k,
                    s: Some(s_tk),
                    delta: Some(delta),
                    route,
                    route_disagreement: Some((s_coeffs - s_tk).operator_norm()),
                    status: SampleStatus::Ok,
                },
                Err(e) => failure_sample(k, route, &e),
            }
        }
    }
}

fn failure_sample(k: Complex64, route: Route, e: &Error) -> SMatrixSample {
    let status = match e {
        Error::SMatrixNonexistent { .. } => SampleStatus::SingularBracket,
        _ => SampleStatus::SingularDelta,
    };
    SMatrixSample {
        k,
        s: None,
        delta: None,
        route,
        route_disagreement: None,
        status,
    }
}

/// Sweep a k-grid. Points run in parallel; output order is the grid order.
pub fn smatrix_grid(q: &Potential, grid: &GridSpec, route: Route) -> Vec<SMatrixSample> {
    grid.points()
        .into_par_iter()
        .map(|k| sample_point(q, k, route))
        .collect()
}

/// Flat record used by both table formats. Missing values (non-ok statuses)
/// serialize as zeros; the status column is authoritative.
#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub re_k: f64,
    pub im_k: f64,
    pub status: &'static str,
    pub re_s11: f64,
    pub im_s11: f64,
    pub re_s12: f64,
    pub im_s12: f64,
    pub re_s21: f64,
    pub im_s21: f64,
    pub re_s22: f64,
    pub im_s22: f64,
    pub abs_delta: f64,
    pub route_disagreement: f64,
}

impl SampleRecord {
    pub fn from_sample(sample: &SMatrixSample) -> Self {
        let s = sample.s.unwrap_or_else(Mat2C::zero);
        SampleRecord {
            re_k: sample.k.re,
            im_k: sample.k.im,
            status: sample.status.as_str(),
            re_s11: s.a11.re,
            im_s11: s.a11.im,
            re_s12: s.a12.re,
            im_s12: s.a12.im,
            re_s21: s.a21.re,
            im_s21: s.a21.im,
            re_s22: s.a22.re,
            im_s22: s.a22.im,
            abs_delta: sample.delta.map_or(0.0, |d| d.norm()),
            route_disagreement: sample.route_disagreement.unwrap_or(0.0),
        }
    }
}

pub const CSV_HEADER: &str = "re_k,im_k,status,re_s11,im_s11,re_s12,im_s12,re_s21,im_s21,re_s22,im_s22,abs_delta,route_disagreement";

/// CSV table, numbers at 17 significant digits (exact f64 round trip).
pub fn write_samples_csv<W: Write>(samples: &[SMatrixSample], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for sample in samples {
        let r = SampleRecord::from_sample(sample);
        writeln!(
            out,
            "{:.16e},{:.16e},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.re_k,
            r.im_k,
            r.status,
            r.re_s11,
            r.im_s11,
            r.re_s12,
            r.im_s12,
            r.re_s21,
            r.im_s21,
            r.re_s22,
            r.im_s22,
            r.abs_delta,
            r.route_disagreement
        )?;
    }
    Ok(())
}

/// JSON mirror of the CSV table: an array of objects with the same fields.
pub fn samples_to_json(samples: &[SMatrixSample]) -> serde_json::Value {
    let records: Vec<SampleRecord> = samples.iter().map(SampleRecord::from_sample).collect();
    serde_json::to_value(records).expect("sample records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::point_interaction_coefficients;
    use crate::potential::Segment;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn kn(re: f64, im: f64) -> Wavenumber {
        Wavenumber::from_parts(re, im).unwrap()
    }

    fn grid_20x20() -> GridSpec {
        GridSpec::new(-2.0, 2.0, 20, 0.1, 2.0, 20).unwrap()
    }

    fn well() -> Potential {
        Potential::piecewise_constant(
            1.0,
            vec![Segment {
                lo: -0.5,
                hi: 0.5,
                value: c(2.0, 0.0),
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
                    value: c(0.0, -1.5),
                },
                Segment {
                    lo: 0.0,
                    hi: 0.5,
                    value: c(0.0, 1.5),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn zero_tk_gives_identity() {
        let t = TkMatrix {
            k: kn(0.9, 0.4),
            tk: Mat2C::zero(),
            delta: c(1.0, 0.0),
            bc_residual: 0.0,
        };
        let s = smatrix_from_tk(&t).unwrap();
        assert!((s - Mat2C::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn free_smatrix_both_routes() {
        for rho in [0.0, 0.5, 1.0] {
            let q = Potential::free(rho).unwrap();
            for &(re, im) in &[(0.7, 0.2), (1.0, 1.0), (-1.3, 0.4)] {
                let k = kn(re, im);
                let expected = Mat2C::sigma_x() * (-(c(0.0, 2.0 * rho) * k.value()).exp());
                let coeffs = scattering_coefficients(&q, k).unwrap();
                let s_c = smatrix_from_coeffs(&coeffs);
                assert!((s_c - expected).max_abs() < 1e-12, "coeffs rho={rho}");
                let bd = traveling_wave_boundary_values(&coeffs);
                let t = tk_from_boundary_data(&bd, k).unwrap();
                let s_t = smatrix_from_tk(&t).unwrap();
                assert!((s_t - expected).max_abs() < 1e-11, "tk rho={rho}");
            }
        }
    }

    #[test]
    fn point_interaction_constant_smatrix() {
        // gamma = 1: S = -((4i/3, 5/3), (5/3, -4i/3)) at every k
        let expected = Mat2C::new(
            c(0.0, -4.0 / 3.0),
            c(-5.0 / 3.0, 0.0),
            c(-5.0 / 3.0, 0.0),
            c(0.0, 4.0 / 3.0),
        );
        for &(re, im) in &[(1.0, 1.0), (0.7, 0.2), (-1.5, 0.01)] {
            let coeffs = point_interaction_coefficients(1.0, kn(re, im)).unwrap();
            let s = smatrix_from_coeffs(&coeffs);
            assert!((s - expected).max_abs() < 1e-13);
            let t =
                tk_from_boundary_data(&traveling_wave_boundary_values(&coeffs), coeffs.k).unwrap();
            let s_t = smatrix_from_tk(&t).unwrap();
            assert!((s_t - expected).max_abs() < 1e-12);
        }
    }

    #[test]
    fn square_well_is_unitary_on_real_axis() {
        let coeffs = scattering_coefficients(&well(), kn(1.0, 0.0)).unwrap();
        let s = smatrix_from_coeffs(&coeffs);
        let defect = (s.adjoint() * s - Mat2C::identity()).operator_norm();
        assert!(defect < 1e-8);
    }

    #[test]
    fn real_axis_branch_matches_limit_from_above() {
        for q in [well(), pt_well()] {
            for re in [0.6, 1.0, -1.4] {
                let on_axis =
                    smatrix_from_coeffs(&scattering_coefficients(&q, kn(re, 0.0)).unwrap());
                let above =
                    smatrix_from_coeffs(&scattering_coefficients(&q, kn(re, 1e-6)).unwrap());
                assert!((on_axis - above).max_abs() < 1e-5, "k={re}");
            }
        }
    }

    #[test]
    fn grid_statuses_and_values() {
        let q = Potential::free(1.0).unwrap();
        let grid = GridSpec::new(-1.0, 1.0, 3, 0.0, 1.0, 3).unwrap();
        let samples = smatrix_grid(&q, &grid, Route::Both);
        assert_eq!(samples.len(), 9);
        for s in &samples {
            if s.k.re == 0.0 {
                assert_eq!(s.status, SampleStatus::ExcludedAxis);
                assert!(s.s.is_none());
            } else {
                assert_eq!(s.status, SampleStatus::Ok);
                let expected = Mat2C::sigma_x() * (-(c(0.0, 2.0) * s.k).exp());
                assert!((s.s.unwrap() - expected).max_abs() < 1e-10);
                assert!(s.route_disagreement.unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn gamma_two_grid_is_all_singular() {
        let q = Potential::point_interaction(2.0).unwrap();
        let samples = smatrix_grid(&q, &grid_20x20(), Route::Both);
        assert!(samples
            .iter()
            .all(|s| s.status == SampleStatus::SingularDelta && s.s.is_none()));
    }

    #[test]
    fn route_equivalence_on_grids() {
        for q in [
            Potential::free(1.0).unwrap(),
            well(),
            pt_well(),
            Potential::point_interaction(1.0).unwrap(),
        ] {
            let samples = smatrix_grid(&q, &grid_20x20(), Route::Both);
            for s in samples.iter().filter(|s| s.status == SampleStatus::Ok) {
                assert!(
                    s.route_disagreement.unwrap() <= 1e-8,
                    "{q:?} k={} disagreement={}",
                    s.k,
                    s.route_disagreement.unwrap()
                );
            }
        }
    }

    #[test]
    fn smatrix_entries_pass_cauchy_riemann_probe() {
        // S(k) is analytic; the coefficients feeding it are not (see coeffs
        // module). FD residual of d/dkbar at step 1e-4 stays under 1e-6.
        let h = 1e-4;
        for q in [Potential::free(1.0).unwrap(), well(), pt_well()] {
            for &(re, im) in &[(0.8, 0.4), (1.5, 0.9), (0.31, 1.2)] {
                let s_at = |k: Complex64| {
                    smatrix_from_coeffs(
                        &scattering_coefficients(&q, Wavenumber::new(k).unwrap()).unwrap(),
                    )
                };
                let k0 = c(re, im);
                let dx = (s_at(k0 + c(h, 0.0)) - s_at(k0 - c(h, 0.0))) * c(1.0 / (2.0 * h), 0.0);
                let dy = (s_at(k0 + c(0.0, h)) - s_at(k0 - c(0.0, h))) * c(1.0 / (2.0 * h), 0.0);
                let residual = ((dx + dy * c(0.0, 1.0)) * c(0.5, 0.0)).max_abs();
                assert!(residual <= 1e-6, "{q:?} k={k0}: {residual}");
            }
        }
    }

    #[test]
    fn csv_format_is_stable() {
        let q = Potential::free(0.5).unwrap();
        let grid = GridSpec::new(0.5, 1.0, 2, 0.0, 0.5, 2).unwrap();
        let samples = smatrix_grid(&q, &grid, Route::Both);
        let mut buf1 = Vec::new();
        write_samples_csv(&samples, &mut buf1).unwrap();
        let text = String::from_utf8(buf1.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(text.lines().count(), 5);
        // deterministic across repeated sweeps
        let samples2 = smatrix_grid(&q, &grid, Route::Both);
        let mut buf2 = Vec::new();
        write_samples_csv(&samples2, &mut buf2).unwrap();
        assert_eq!(buf1, buf2);

        let json = samples_to_json(&samples);
        assert_eq!(json.as_array().unwrap().len(), 4);
        assert!(json[0].get("abs_delta").is_some());
    }
}
