//! Command-line driver: `smatrix`, `verify`, `recover`, `selftest`.
//!
//! Exit codes: 0 success, 2 config error (including I/O), 3 a selected
//! relation exceeded its tolerance, 4 degenerate metric fit.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;

use crate::acceptance;
use crate::config::{
    apply_tolerance_flag, parse_grid_override, parse_sweep_config, ConfigError, OutputFormat,
    SweepConfig,
};
use crate::error::Error;
use crate::inverse::{c_operator, recover_metric, recover_metric_general, MetricSample};
use crate::mat2::Mat2C;
use crate::propagate::Wavenumber;
use crate::smatrix::{
    sample_point, samples_to_json, smatrix_grid, write_samples_csv, Route, SampleStatus,
};
use crate::verify::{
    check_contraction, check_hermitian_analyticity, check_metric_relations, check_pt_relation,
    check_unitarity,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;
pub const EXIT_DEGENERATE: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Io(std::io::Error),
    ToleranceExceeded { failed: Vec<String> },
    DegenerateFit,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::ToleranceExceeded { .. } => EXIT_TOLERANCE,
            CliError::DegenerateFit => EXIT_DEGENERATE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::ToleranceExceeded { failed } => {
                write!(f, "relations over tolerance: {}", failed.join(", "))
            }
            CliError::DegenerateFit => write!(f, "{}", Error::DegenerateFit),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser)]
#[command(
    name = "ptscatter",
    version,
    about = "Analytically continued S-matrices for compactly supported PT-symmetric potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sweep S(k) over a k-grid and write the sample table
    Smatrix(SweepArgs),
    /// Evaluate symmetry relations on a k ↦ −k̄ symmetrized grid
    Verify(VerifyArgs),
    /// Recover the metric operator e^Q from S-matrix samples
    Recover(RecoverArgs),
    /// Run the acceptance suite and print one line per criterion
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Coeffs,
    Tk,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
pub struct SweepArgs {
    /// JSON sweep configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Grid override: re_min:re_max:n,im_min:im_max:m
    #[arg(long)]
    pub grid: Option<String>,
    /// Assembly route override
    #[arg(long, value_enum)]
    pub route: Option<RouteArg>,
    /// Output path override
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format override
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Tolerance override name=value (repeatable)
    #[arg(long = "tol")]
    pub tol: Vec<String>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Relations to check: pt, hermitian, contraction, unitarity, metric
    #[arg(long, value_delimiter = ',', required = true)]
    pub relations: Vec<String>,
}

#[derive(Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Also fit all four Pauli coefficients of e^Q and report the
    /// constraint-violating mass
    #[arg(long)]
    pub diagnostic: bool,
}

/// Top-level dispatch; prints errors to stderr and returns the exit code.
pub fn run(cli: Cli) -> u8 {
    let outcome = match cli.command {
        Command::Smatrix(args) => run_smatrix(&args),
        Command::Verify(args) => run_verify(&args),
        Command::Recover(args) => run_recover(&args),
        Command::Selftest => return run_selftest(),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let bytes = fs::read(&args.config)?;
    let mut config = parse_sweep_config(&bytes)?;
    if let Some(grid) = &args.grid {
        config.grid = parse_grid_override(grid)?;
    }
    if let Some(route) = args.route {
        config.route = match route {
            RouteArg::Coeffs => Route::Coeffs,
            RouteArg::Tk => Route::Tk,
            RouteArg::Both => Route::Both,
        };
    }
    if let Some(format) = args.format {
        config.output_format = match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if let Some(out) = &args.out {
        config.output_path = Some(out.to_string_lossy().into_owned());
    }
    for flag in &args.tol {
        apply_tolerance_flag(&mut config.tolerances, flag)?;
    }
    Ok(config)
}

fn output_path(config: &SweepConfig, default_name: &str) -> PathBuf {
    config
        .output_path
        .as_ref()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(default_name))
}

fn run_smatrix(args: &SweepArgs) -> Result<(), CliError> {
    let config = load_config(args)?;
    let samples = smatrix_grid(&config.potential, &config.grid, config.route);
    let default_name = match config.output_format {
        OutputFormat::Csv => "smatrix.csv",
        OutputFormat::Json => "smatrix.json",
    };
    let path = output_path(&config, default_name);
    match config.output_format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_samples_csv(&samples, &mut buf)?;
            fs::write(&path, buf)?;
        }
        OutputFormat::Json => {
            fs::write(
                &path,
                serde_json::to_string_pretty(&samples_to_json(&samples))?.as_bytes(),
            )?;
        }
    }
    let mut counts = [0usize; 4];
    for s in &samples {
        let idx = match s.status {
            SampleStatus::Ok => 0,
            SampleStatus::SingularDelta => 1,
            SampleStatus::SingularBracket => 2,
            SampleStatus::ExcludedAxis => 3,
        };
        counts[idx] += 1;
    }
    println!(
        "wrote {} samples to {} (ok {}, singular_delta {}, singular_bracket {}, excluded_axis {})",
        samples.len(),
        path.display(),
        counts[0],
        counts[1],
        counts[2],
        counts[3]
    );
    Ok(())
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(ConfigError::Json(e))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Relation {
    Pt,
    Hermitian,
    Contraction,
    Unitarity,
    Metric,
}

fn parse_relations(names: &[String]) -> Result<Vec<Relation>, CliError> {
    let mut out = Vec::new();
    for name in names {
        let r = match name.trim().to_ascii_lowercase().as_str() {
            "pt" => Relation::Pt,
            "hermitian" => Relation::Hermitian,
            "contraction" => Relation::Contraction,
            "unitarity" => Relation::Unitarity,
            "metric" => Relation::Metric,
            other => {
                return Err(CliError::Config(ConfigError::Invalid(format!(
                    "unknown relation {other:?} (expected pt, hermitian, contraction, unitarity, metric)"
                ))))
            }
        };
        if !out.contains(&r) {
            out.push(r);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(ConfigError::Invalid(
            "no relations selected".into(),
        )));
    }
    Ok(out)
}

/// One symmetrized pair: the representative k (Re k > 0) and both S values.
struct PairSample {
    k: Wavenumber,
    s_k: Mat2C,
    s_mirror: Mat2C,
}

/// Collect (k, −k̄) pairs from the grid: every point contributes the
/// representative with |Re k|, duplicates collapse, Re k = 0 points are
/// skipped. Returns (pairs, skipped_count).
fn symmetrized_pairs(config: &SweepConfig) -> (Vec<PairSample>, usize) {
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut pairs = Vec::new();
    let mut skipped = 0usize;
    for point in config.grid.points() {
        if point.re == 0.0 {
            skipped += 1;
            continue;
        }
        let canonical = Complex64::new(point.re.abs(), point.im);
        if !seen.insert((canonical.re.to_bits(), canonical.im.to_bits())) {
            continue;
        }
        let k = match Wavenumber::new(canonical) {
            Ok(k) => k,
            Err(_) => {
                skipped += 1;
                continue;
            }
        };
        let plus = sample_point(&config.potential, canonical, config.route);
        let minus = sample_point(&config.potential, -canonical.conj(), config.route);
        match (plus.s, minus.s) {
            (Some(s_k), Some(s_mirror)) => pairs.push(PairSample { k, s_k, s_mirror }),
            _ => skipped += 1,
        }
    }
    (pairs, skipped)
}

#[derive(Serialize)]
struct PairReport {
    re_k: f64,
    im_k: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hermitian: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    contraction_excess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unitarity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric_intertwining: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric_min_eig: Option<f64>,
}

#[derive(Serialize)]
struct RelationSummary {
    relation: String,
    /// max residual (min eigenvalue for metric_min_eig)
    worst: f64,
    median: f64,
    tolerance: f64,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    route: Route,
    pairs_evaluated: usize,
    pairs_skipped: usize,
    summary: Vec<RelationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric: Option<MetricReport>,
    pairs: Vec<PairReport>,
}

#[derive(Serialize)]
struct MetricReport {
    chi: f64,
    tanh_chi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_implied: Option<f64>,
    fit_residual: f64,
    #[serde(rename = "eQ")]
    e_q: [[[f64; 2]; 2]; 2],
    c: [[[f64; 2]; 2]; 2],
}

fn matrix_to_rows(m: &Mat2C) -> [[[f64; 2]; 2]; 2] {
    [
        [[m.a11.re, m.a11.im], [m.a12.re, m.a12.im]],
        [[m.a21.re, m.a21.im], [m.a22.re, m.a22.im]],
    ]
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let config = load_config(&args.sweep)?;
    let relations = parse_relations(&args.relations)?;
    let (pairs, skipped) = symmetrized_pairs(&config);

    // the metric relation checks the recovered e^Q
    let metric_estimate = if relations.contains(&Relation::Metric) {
        let samples: Vec<MetricSample> = pairs.iter().map(|p| (p.k, p.s_k, p.s_mirror)).collect();
        Some(recover_metric(&samples).map_err(|e| match e {
            Error::DegenerateFit => CliError::DegenerateFit,
            other => CliError::Config(ConfigError::Domain(other)),
        })?)
    } else {
        None
    };

    let mut reports = Vec::with_capacity(pairs.len());
    for p in &pairs {
        let mut row = PairReport {
            re_k: p.k.re(),
            im_k: p.k.im(),
            pt: None,
            hermitian: None,
            contraction_excess: None,
            unitarity: None,
            metric_intertwining: None,
            metric_min_eig: None,
        };
        for r in &relations {
            match r {
                Relation::Pt => row.pt = Some(check_pt_relation(&p.s_k, &p.s_mirror)),
                Relation::Hermitian => {
                    row.hermitian = Some(check_hermitian_analyticity(&p.s_k, &p.s_mirror))
                }
                Relation::Contraction => {
                    row.contraction_excess =
                        Some(check_contraction(&p.s_k).max(check_contraction(&p.s_mirror)))
                }
                Relation::Unitarity => {
                    if p.k.is_real_axis() {
                        row.unitarity =
                            Some(check_unitarity(&p.s_k).max(check_unitarity(&p.s_mirror)));
                    }
                }
                Relation::Metric => {
                    if let Some(est) = &metric_estimate {
                        let (intertwining, min_eig) =
                            check_metric_relations(&p.s_k, &p.s_mirror, &est.e_q)
                                .map_err(|e| CliError::Config(ConfigError::Domain(e)))?;
                        row.metric_intertwining = Some(intertwining);
                        row.metric_min_eig = Some(min_eig);
                    }
                }
            }
        }
        reports.push(row);
    }

    let tol = &config.tolerances;
    let mut summary = Vec::new();
    let mut failed = Vec::new();
    for r in &relations {
        let entries: Vec<(&str, Vec<f64>, f64, bool)> = match r {
            Relation::Pt => vec![(
                "pt",
                reports.iter().filter_map(|p| p.pt).collect(),
                tol.pt,
                true,
            )],
            Relation::Hermitian => vec![(
                "hermitian",
                reports.iter().filter_map(|p| p.hermitian).collect(),
                tol.hermitian,
                true,
            )],
            Relation::Contraction => vec![(
                "contraction",
                reports
                    .iter()
                    .filter_map(|p| p.contraction_excess)
                    .collect(),
                tol.contraction,
                true,
            )],
            Relation::Unitarity => vec![(
                "unitarity",
                reports.iter().filter_map(|p| p.unitarity).collect(),
                tol.unitarity,
                true,
            )],
            Relation::Metric => vec![
                (
                    "metric_intertwining",
                    reports
                        .iter()
                        .filter_map(|p| p.metric_intertwining)
                        .collect(),
                    tol.metric_intertwining,
                    true,
                ),
                (
                    "metric_min_eig",
                    reports.iter().filter_map(|p| p.metric_min_eig).collect(),
                    tol.metric_min_eig,
                    false,
                ),
            ],
        };
        for (name, mut values, tolerance, upper_bound) in entries {
            let (worst, pass) = if values.is_empty() {
                (0.0, true)
            } else if upper_bound {
                let worst = values.iter().cloned().fold(0.0f64, f64::max);
                (worst, worst <= tolerance)
            } else {
                let worst = values.iter().cloned().fold(f64::INFINITY, f64::min);
                (worst, worst >= -tolerance)
            };
            if !pass {
                failed.push(name.to_string());
            }
            summary.push(RelationSummary {
                relation: name.to_string(),
                worst,
                median: median(&mut values),
                tolerance,
                pass,
            });
        }
    }

    let report = VerifyReport {
        route: config.route,
        pairs_evaluated: reports.len(),
        pairs_skipped: skipped,
        summary,
        metric: metric_estimate.map(|est| {
            let (_, c_matrix, _) = c_operator(est.chi);
            MetricReport {
                chi: est.chi,
                tanh_chi: est.chi.tanh(),
                beta_implied: est.beta_implied,
                fit_residual: est.fit_residual,
                e_q: matrix_to_rows(&est.e_q),
                c: matrix_to_rows(&c_matrix),
            }
        }),
        pairs: reports,
    };

    let path = output_path(&config, "verify_report.json");
    fs::write(&path, serde_json::to_string_pretty(&report)?.as_bytes())?;
    for s in &report.summary {
        println!(
            "{} {}: worst {:.3e} median {:.3e} (tolerance {:.1e})",
            if s.pass { "pass" } else { "FAIL" },
            s.relation,
            s.worst,
            s.median,
            s.tolerance
        );
    }
    println!(
        "report with {} pairs written to {}",
        report.pairs_evaluated,
        path.display()
    );
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ToleranceExceeded { failed })
    }
}

#[derive(Serialize)]
struct RecoverOutput {
    chi: f64,
    tanh_chi: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_implied: Option<f64>,
    fit_residual: f64,
    #[serde(rename = "eQ")]
    e_q: [[[f64; 2]; 2]; 2],
    #[serde(rename = "C")]
    c: [[[f64; 2]; 2]; 2],
    description: String,
    samples_used: usize,
    samples_skipped: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<DiagnosticOutput>,
}

#[derive(Serialize)]
struct DiagnosticOutput {
    e_q_pauli_coefficients: [f64; 4],
    fit_residual: f64,
    null_dimension: usize,
    positive_definite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    constrained_chi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    discarded_fraction: Option<f64>,
}

fn run_recover(args: &RecoverArgs) -> Result<(), CliError> {
    let config = load_config(&args.sweep)?;
    let (pairs, skipped) = symmetrized_pairs(&config);
    let samples: Vec<MetricSample> = pairs.iter().map(|p| (p.k, p.s_k, p.s_mirror)).collect();
    let estimate = recover_metric(&samples).map_err(|e| match e {
        Error::DegenerateFit => CliError::DegenerateFit,
        other => CliError::Config(ConfigError::Domain(other)),
    })?;
    let (e_q, c_matrix, description) = c_operator(estimate.chi);

    let diagnostic = if args.diagnostic {
        let fit = recover_metric_general(&samples).map_err(|e| match e {
            Error::DegenerateFit => CliError::DegenerateFit,
            other => CliError::Config(ConfigError::Domain(other)),
        })?;
        Some(DiagnosticOutput {
            e_q_pauli_coefficients: fit.e_q_coefficients,
            fit_residual: fit.fit_residual,
            null_dimension: fit.null_dimension,
            positive_definite: fit.positive_definite,
            constrained_chi: fit.constrained_chi,
            discarded_fraction: fit.discarded_fraction,
        })
    } else {
        None
    };

    let output = RecoverOutput {
        chi: estimate.chi,
        tanh_chi: estimate.chi.tanh(),
        beta_implied: estimate.beta_implied,
        fit_residual: estimate.fit_residual,
        e_q: matrix_to_rows(&e_q),
        c: matrix_to_rows(&c_matrix),
        description,
        samples_used: samples.len(),
        samples_skipped: skipped,
        diagnostic,
    };
    let path = output_path(&config, "metric.json");
    fs::write(&path, serde_json::to_string_pretty(&output)?.as_bytes())?;
    println!(
        "chi = {:.12} (tanh chi = {:.12}), fit residual {:.3e}, written to {}",
        output.chi,
        output.tanh_chi,
        output.fit_residual,
        path.display()
    );
    Ok(())
}

fn run_selftest() -> u8 {
    let reports = acceptance::run_all();
    let mut all_passed = true;
    for r in &reports {
        println!("{}", r.line());
        all_passed &= r.passed;
    }
    if all_passed {
        println!("all {} criteria passed", reports.len());
        EXIT_OK
    } else {
        println!("acceptance suite FAILED");
        1
    }
}

/// Entry point used by the binary.
pub fn main_entry() -> u8 {
    run(Cli::parse())
}
