//! JSON configuration schemas and the `--grid` override syntax.
//!
//! These parsers take untrusted input (config files, CLI strings); they must
//! reject anything malformed with an error and never panic. The fuzz targets
//! under `fuzz/` drive each entry point with arbitrary bytes.

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::potential::{Potential, Segment};
use crate::smatrix::{GridSpec, Route};
use crate::verify::Tolerances;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("config: {0}")]
    Invalid(String),
    #[error("config: {0}")]
    Domain(#[from] crate::error::Error),
}

/// Potential schema:
/// {"type":"free"|"point"|"piecewise"|"sampled", "rho":…, "gamma":…,
///  "segments":[{"lo":…,"hi":…,"re":…,"im":…}], "samples":{"values":[[re,im],…]}}
#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    Free {
        rho: f64,
    },
    Point {
        gamma: f64,
        #[serde(default)]
        rho: f64,
    },
    Piecewise {
        rho: f64,
        segments: Vec<SegmentSpec>,
    },
    Sampled {
        rho: f64,
        samples: SampleValues,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub lo: f64,
    pub hi: f64,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleValues {
    pub values: Vec<[f64; 2]>,
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential, ConfigError> {
        let p = match self {
            PotentialSpec::Free { rho } => Potential::free(*rho)?,
            PotentialSpec::Point { gamma, rho } => {
                Potential::point_interaction_with_window(*gamma, *rho)?
            }
            PotentialSpec::Piecewise { rho, segments } => {
                let segs = segments
                    .iter()
                    .map(|s| Segment {
                        lo: s.lo,
                        hi: s.hi,
                        value: Complex64::new(s.re, s.im),
                    })
                    .collect();
                Potential::piecewise_constant(*rho, segs)?
            }
            PotentialSpec::Sampled { rho, samples } => {
                let values = samples
                    .values
                    .iter()
                    .map(|[re, im]| Complex64::new(*re, *im))
                    .collect();
                Potential::sampled(*rho, values)?
            }
        };
        Ok(p)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSpecFile {
    re: (f64, f64, usize),
    im: (f64, f64, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSpecFile {
    path: String,
    #[serde(default)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesFile {
    pt: Option<f64>,
    hermitian: Option<f64>,
    contraction: Option<f64>,
    unitarity: Option<f64>,
    metric_intertwining: Option<f64>,
    metric_min_eig: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RouteFile {
    Coeffs,
    Tk,
    Both,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepConfigFile {
    potential: PotentialSpec,
    grid: GridSpecFile,
    #[serde(default)]
    route: Option<RouteFile>,
    #[serde(default)]
    tolerances: Option<TolerancesFile>,
    #[serde(default)]
    output: Option<OutputSpecFile>,
}

/// A validated sweep configuration.
#[derive(Debug)]
pub struct SweepConfig {
    pub potential: Potential,
    pub grid: GridSpec,
    pub route: Route,
    pub tolerances: Tolerances,
    pub output_path: Option<String>,
    pub output_format: OutputFormat,
}

/// Parse and validate a potential document.
pub fn parse_potential_json(bytes: &[u8]) -> Result<Potential, ConfigError> {
    let spec: PotentialSpec = serde_json::from_slice(bytes)?;
    spec.build()
}

/// Parse and validate a full sweep configuration document.
pub fn parse_sweep_config(bytes: &[u8]) -> Result<SweepConfig, ConfigError> {
    let file: SweepConfigFile = serde_json::from_slice(bytes)?;
    let potential = file.potential.build()?;
    let (re_min, re_max, re_count) = file.grid.re;
    let (im_min, im_max, im_count) = file.grid.im;
    let grid = GridSpec::new(re_min, re_max, re_count, im_min, im_max, im_count)?;
    let route = match file.route {
        Some(RouteFile::Coeffs) => Route::Coeffs,
        Some(RouteFile::Tk) => Route::Tk,
        Some(RouteFile::Both) | None => Route::Both,
    };
    let mut tolerances = Tolerances::default();
    if let Some(t) = file.tolerances {
        apply_tolerance_overrides(&mut tolerances, &t)?;
    }
    let (output_path, output_format) = match file.output {
        Some(o) => (Some(o.path), o.format.unwrap_or(OutputFormat::Csv)),
        None => (None, OutputFormat::Csv),
    };
    Ok(SweepConfig {
        potential,
        grid,
        route,
        tolerances,
        output_path,
        output_format,
    })
}

fn apply_tolerance_overrides(
    tol: &mut Tolerances,
    file: &TolerancesFile,
) -> Result<(), ConfigError> {
    let entries = [
        (&mut tol.pt, file.pt),
        (&mut tol.hermitian, file.hermitian),
        (&mut tol.contraction, file.contraction),
        (&mut tol.unitarity, file.unitarity),
        (&mut tol.metric_intertwining, file.metric_intertwining),
        (&mut tol.metric_min_eig, file.metric_min_eig),
    ];
    for (slot, value) in entries {
        if let Some(v) = value {
            if !v.is_finite() || v < 0.0 {
                return Err(ConfigError::Invalid(format!(
                    "tolerance must be finite and >= 0, got {v}"
                )));
            }
            *slot = v;
        }
    }
    Ok(())
}

/// Parse a `--grid` override: `re_min:re_max:n,im_min:im_max:m`,
/// e.g. `-2:2:20,0.1:2:20`.
pub fn parse_grid_override(text: &str) -> Result<GridSpec, ConfigError> {
    let mut axes = text.split(',');
    let re = axes.next().ok_or_else(|| bad_grid(text))?;
    let im = axes.next().ok_or_else(|| bad_grid(text))?;
    if axes.next().is_some() {
        return Err(bad_grid(text));
    }
    let (re_min, re_max, re_count) = parse_axis(re).ok_or_else(|| bad_grid(text))?;
    let (im_min, im_max, im_count) = parse_axis(im).ok_or_else(|| bad_grid(text))?;
    Ok(GridSpec::new(
        re_min, re_max, re_count, im_min, im_max, im_count,
    )?)
}

fn parse_axis(text: &str) -> Option<(f64, f64, usize)> {
    let mut parts = text.split(':');
    let min: f64 = parts.next()?.trim().parse().ok()?;
    let max: f64 = parts.next()?.trim().parse().ok()?;
    let count: usize = parts.next()?.trim().parse().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((min, max, count))
}

fn bad_grid(text: &str) -> ConfigError {
    ConfigError::Invalid(format!(
        "grid override must look like re_min:re_max:n,im_min:im_max:m (got {text:?})"
    ))
}

/// Parse one `--tol name=value` override onto a tolerance set.
pub fn apply_tolerance_flag(tol: &mut Tolerances, flag: &str) -> Result<(), ConfigError> {
    let (name, value) = flag
        .split_once('=')
        .ok_or_else(|| ConfigError::Invalid(format!("--tol expects name=value, got {flag:?}")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| ConfigError::Invalid(format!("bad tolerance value in {flag:?}")))?;
    if !value.is_finite() || value < 0.0 {
        return Err(ConfigError::Invalid(format!(
            "tolerance must be finite and >= 0, got {value}"
        )));
    }
    match name.trim() {
        "pt" => tol.pt = value,
        "hermitian" => tol.hermitian = value,
        "contraction" => tol.contraction = value,
        "unitarity" => tol.unitarity = value,
        "metric_intertwining" => tol.metric_intertwining = value,
        "metric_min_eig" => tol.metric_min_eig = value,
        other => {
            return Err(ConfigError::Invalid(format!(
                "unknown tolerance {other:?} (expected pt, hermitian, contraction, unitarity, metric_intertwining, metric_min_eig)"
            )))
        }
    }
    Ok(())
}
