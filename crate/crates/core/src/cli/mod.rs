//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors. Every failure
//! prints exactly one `error: <CODE>: <detail>` line to the error stream.

pub mod input;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coefficient::{
    check_correlation_matrix, mcor_from_matrix_with, mcor_with, McorReport, PSD_THRESHOLD,
};
use crate::error::Error;
use crate::linalg::{JacobiSolver, SymmetricMatrix};
use crate::sim::{monte_carlo_with, Scenario};
use crate::stats::correlation_matrix;
use input::{detect_kind, read_csv_data, read_matrix, read_square, InputKind, SYMMETRY_TOLERANCE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// `compare` calls a difference at or below this a tie.
pub const TIE_THRESHOLD: f64 = 1e-9;

pub const DEFAULT_N_OBS: usize = 1000;
pub const DEFAULT_REPLICATES: usize = 200;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Compute,
    Matrix,
    Compare,
    Simulate,
    Validate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Compute => "compute",
            Command::Matrix => "matrix",
            Command::Compare => "compare",
            Command::Simulate => "simulate",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AsKind {
    Matrix,
    Data,
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub input_paths: Vec<PathBuf>,
    pub columns: Option<Vec<String>>,
    pub drop_na: bool,
    pub output_format: OutputFormat,
    pub seed: Option<u64>,
    pub n_obs: Option<usize>,
    pub replicates: Option<usize>,
    pub scenario: Option<Scenario>,
    /// Forces the interpretation of inputs in `compare` and `validate`.
    pub input_kind: Option<InputKind>,
    pub max_sweeps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgsError {
    /// `--help` or `--version`; print to stdout and exit 0.
    Info(String),
    Usage(String),
}

#[derive(Parser)]
#[command(
    name = "mcor",
    version,
    about = "Multi-way correlation coefficient of a set of variables"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Output format
    #[arg(long = "output", value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    /// Sweep limit for the Jacobi eigensolver
    #[arg(long = "max-sweeps", value_parser = clap::value_parser!(u64).range(1..))]
    max_sweeps: Option<u64>,
}

#[derive(Args)]
struct Selection {
    /// Comma-separated column names to use (default: all numeric columns)
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    /// Drop rows with missing or non-numeric cells in the selected columns
    #[arg(long = "drop-na")]
    drop_na: bool,
}

#[derive(Subcommand)]
enum Sub {
    /// Coefficient of the columns of a CSV data file
    Compute {
        path: PathBuf,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        common: Common,
    },
    /// Coefficient of a precomputed correlation matrix stored as CSV
    Matrix {
        path: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Which of two datasets or matrices is more correlated
    Compare {
        path_a: PathBuf,
        path_b: PathBuf,
        /// Treat both inputs as matrices or as raw data instead of auto-detecting
        #[arg(long = "as", value_enum)]
        as_kind: Option<AsKind>,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo summary of a built-in scenario
    Simulate {
        /// all-linear, linear-combo, independent, noisy-combo or chained
        #[arg(value_parser = parse_scenario)]
        scenario: Scenario,
        /// Observations per replicate
        #[arg(long = "n", value_parser = clap::value_parser!(u64).range(2..))]
        n_obs: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of replicates
        #[arg(long = "reps", value_parser = clap::value_parser!(u64).range(1..))]
        replicates: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Correlation-matrix diagnostics: symmetry, unit diagonal, range, PSD
    Validate {
        path: PathBuf,
        #[arg(long = "as", value_enum)]
        as_kind: Option<AsKind>,
        #[command(flatten)]
        selection: Selection,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl From<AsKind> for InputKind {
    fn from(k: AsKind) -> Self {
        match k {
            AsKind::Matrix => InputKind::Matrix,
            AsKind::Data => InputKind::Data,
        }
    }
}

/// Parses arguments, excluding the program name.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, ArgsError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args =
        std::iter::once(std::ffi::OsString::from("mcor")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ArgsError::Info(e.to_string()),
            _ => {
                let text = e.to_string();
                let first = text
                    .lines()
                    .find(|l| !l.trim().is_empty())
                    .unwrap_or("invalid arguments")
                    .trim_start_matches("error: ")
                    .to_owned();
                ArgsError::Usage(first)
            }
        }
    })?;

    let mut cfg = RunConfig {
        command: Command::Compute,
        input_paths: Vec::new(),
        columns: None,
        drop_na: false,
        output_format: OutputFormat::Text,
        seed: None,
        n_obs: None,
        replicates: None,
        scenario: None,
        input_kind: None,
        max_sweeps: None,
    };
    fn apply_common(cfg: &mut RunConfig, c: Common) {
        cfg.output_format = c.output;
        cfg.max_sweeps = c.max_sweeps.map(|v| v as usize);
    }
    fn apply_selection(cfg: &mut RunConfig, s: Selection) -> Result<(), ArgsError> {
        if let Some(cols) = &s.columns {
            if cols.is_empty() || cols.iter().any(|c| c.is_empty()) {
                return Err(ArgsError::Usage(
                    "--columns needs a comma-separated list of names".into(),
                ));
            }
        }
        cfg.columns = s.columns;
        cfg.drop_na = s.drop_na;
        Ok(())
    }

    match cli.command {
        Sub::Compute {
            path,
            selection,
            common,
        } => {
            cfg.command = Command::Compute;
            cfg.input_paths = vec![path];
            apply_selection(&mut cfg, selection)?;
            apply_common(&mut cfg, common);
        }
        Sub::Matrix { path, common } => {
            cfg.command = Command::Matrix;
            cfg.input_paths = vec![path];
            apply_common(&mut cfg, common);
        }
        Sub::Compare {
            path_a,
            path_b,
            as_kind,
            selection,
            common,
        } => {
            cfg.command = Command::Compare;
            cfg.input_paths = vec![path_a, path_b];
            cfg.input_kind = as_kind.map(Into::into);
            if cfg.input_kind == Some(InputKind::Matrix)
                && (selection.columns.is_some() || selection.drop_na)
            {
                return Err(ArgsError::Usage(
                    "--columns and --drop-na cannot be combined with --as matrix".into(),
                ));
            }
            apply_selection(&mut cfg, selection)?;
            apply_common(&mut cfg, common);
        }
        Sub::Simulate {
            scenario,
            n_obs,
            seed,
            replicates,
            common,
        } => {
            cfg.command = Command::Simulate;
            cfg.scenario = Some(scenario);
            cfg.n_obs = n_obs.map(|v| v as usize);
            cfg.seed = seed;
            cfg.replicates = replicates.map(|v| v as usize);
            apply_common(&mut cfg, common);
        }
        Sub::Validate {
            path,
            as_kind,
            selection,
            common,
        } => {
            cfg.command = Command::Validate;
            cfg.input_paths = vec![path];
            cfg.input_kind = as_kind.map(Into::into);
            if cfg.input_kind == Some(InputKind::Matrix)
                && (selection.columns.is_some() || selection.drop_na)
            {
                return Err(ArgsError::Usage(
                    "--columns and --drop-na cannot be combined with --as matrix".into(),
                ));
            }
            apply_selection(&mut cfg, selection)?;
            apply_common(&mut cfg, common);
        }
    }
    Ok(cfg)
}

/// Which of two inputs is more correlated.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub report_a: McorReport,
    pub report_b: McorReport,
    pub more_correlated: Verdict,
    /// `mcor(B) − mcor(A)`.
    pub delta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    A,
    B,
    Tie,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::A => "A",
            Verdict::B => "B",
            Verdict::Tie => "tie",
        }
    }
}

pub fn compare_reports(report_a: McorReport, report_b: McorReport) -> ComparisonReport {
    let delta = report_b.mcor - report_a.mcor;
    let more_correlated = if delta.abs() <= TIE_THRESHOLD {
        Verdict::Tie
    } else if delta > 0.0 {
        Verdict::B
    } else {
        Verdict::A
    };
    ComparisonReport {
        report_a,
        report_b,
        more_correlated,
        delta,
    }
}

/// Outcome of a command: what to print, and optionally the error that makes it fail.
struct Rendered {
    stdout: String,
    failure: Option<Error>,
}

impl From<String> for Rendered {
    fn from(stdout: String) -> Self {
        Self {
            stdout,
            failure: None,
        }
    }
}

fn solver(cfg: &RunConfig) -> JacobiSolver {
    cfg.max_sweeps
        .map_or_else(JacobiSolver::default, JacobiSolver::with_max_sweeps)
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

struct Loaded {
    kind: InputKind,
    report: McorReport,
    n_obs: Option<usize>,
    names: Option<Vec<String>>,
}

fn load(cfg: &RunConfig, path: &Path, kind: InputKind) -> Result<Loaded, Error> {
    let solver = solver(cfg);
    match kind {
        InputKind::Matrix => Ok(Loaded {
            kind,
            report: mcor_from_matrix_with(&read_matrix(path)?, &solver)?,
            n_obs: None,
            names: None,
        }),
        InputKind::Data => {
            let data = read_csv_data(path, cfg.columns.as_deref(), cfg.drop_na)?;
            Ok(Loaded {
                kind,
                report: mcor_with(&data, &solver)?,
                n_obs: Some(data.n_obs()),
                names: Some(data.names().to_vec()),
            })
        }
    }
}

fn input_json(cfg: &RunConfig, path: &Path, loaded: &Loaded) -> Value {
    let mut v = json!({ "path": path_str(path), "as": loaded.kind.name() });
    if loaded.kind == InputKind::Data {
        v["columns"] = json!(loaded.names);
        v["n_obs"] = json!(loaded.n_obs);
        v["drop_na"] = json!(cfg.drop_na);
    }
    v
}

fn run_single(cfg: &RunConfig, kind: InputKind) -> Result<Rendered, Error> {
    let path = &cfg.input_paths[0];
    let loaded = load(cfg, path, kind)?;
    let r = &loaded.report;
    Ok(match cfg.output_format {
        OutputFormat::Json => output::envelope(
            cfg.command.name(),
            input_json(cfg, path, &loaded),
            output::report_json(r),
            &r.warnings,
        ),
        OutputFormat::Text => {
            let mut s = output::report_text(&path_str(path), r);
            s.push_str(&output::warnings_text(&r.warnings));
            s
        }
    }
    .into())
}

fn resolve_kind(cfg: &RunConfig, path: &Path) -> Result<InputKind, Error> {
    match cfg.input_kind {
        Some(k) => Ok(k),
        None => detect_kind(path),
    }
}

fn run_compare(cfg: &RunConfig) -> Result<Rendered, Error> {
    let (pa, pb) = (&cfg.input_paths[0], &cfg.input_paths[1]);
    let a = load(cfg, pa, resolve_kind(cfg, pa)?)?;
    let b = load(cfg, pb, resolve_kind(cfg, pb)?)?;
    let inputs = json!({ "a": input_json(cfg, pa, &a), "b": input_json(cfg, pb, &b) });
    let cmp = compare_reports(a.report, b.report);
    let warnings: Vec<String> = cmp
        .report_a
        .warnings
        .iter()
        .map(|w| format!("A: {w}"))
        .chain(cmp.report_b.warnings.iter().map(|w| format!("B: {w}")))
        .collect();
    Ok(match cfg.output_format {
        OutputFormat::Json => output::envelope(
            "compare",
            inputs,
            json!({
                "a": output::report_json(&cmp.report_a),
                "b": output::report_json(&cmp.report_b),
                "more_correlated": cmp.more_correlated.name(),
                "delta": output::num(cmp.delta),
            }),
            &warnings,
        ),
        OutputFormat::Text => {
            let mut s = output::report_text(&format!("A: {}", path_str(pa)), &cmp.report_a);
            s.push_str(&output::report_text(
                &format!("B: {}", path_str(pb)),
                &cmp.report_b,
            ));
            let verdict = match cmp.more_correlated {
                Verdict::Tie => "neither (tie)".to_string(),
                v => v.name().to_string(),
            };
            s.push_str(&format!(
                "more correlated: {verdict} (delta = {:+.4})\n",
                cmp.delta
            ));
            s.push_str(&output::warnings_text(&warnings));
            s
        }
    }
    .into())
}

fn run_simulate(cfg: &RunConfig) -> Result<Rendered, Error> {
    let scenario = cfg.scenario.expect("simulate config carries a scenario");
    let n_obs = cfg.n_obs.unwrap_or(DEFAULT_N_OBS);
    let reps = cfg.replicates.unwrap_or(DEFAULT_REPLICATES);
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let summary = monte_carlo_with(scenario, n_obs, reps, seed, &solver(cfg))?;
    Ok(match cfg.output_format {
        OutputFormat::Json => output::envelope(
            "simulate",
            json!({
                "scenario": scenario.name(),
                "description": scenario.description(),
                "n_obs": n_obs,
                "replicates": reps,
                "seed": seed,
            }),
            output::summary_json(&summary),
            &[],
        ),
        OutputFormat::Text => output::summary_text(&summary),
    }
    .into())
}

/// Diagnostics for `validate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub dim: usize,
    pub max_asymmetry: f64,
    pub max_diagonal_deviation: f64,
    pub max_abs_off_diagonal: f64,
    /// `None` when the matrix is too asymmetric to analyse.
    pub min_eigenvalue: Option<f64>,
    pub problems: Vec<String>,
}

pub fn diagnose(dim: usize, full: &[f64], solver: &JacobiSolver) -> Result<Diagnostics, Error> {
    let at = |i: usize, j: usize| full[i * dim + j];
    let mut max_asymmetry = 0.0f64;
    let mut max_diagonal_deviation = 0.0f64;
    let mut max_abs_off_diagonal = 0.0f64;
    for i in 0..dim {
        max_diagonal_deviation = max_diagonal_deviation.max((at(i, i) - 1.0).abs());
        for j in 0..i {
            max_asymmetry = max_asymmetry.max((at(i, j) - at(j, i)).abs());
            max_abs_off_diagonal = max_abs_off_diagonal.max(at(i, j).abs()).max(at(j, i).abs());
        }
    }
    let mut problems = Vec::new();
    let min_eigenvalue = match SymmetricMatrix::from_full(dim, full, SYMMETRY_TOLERANCE) {
        Ok(m) => {
            let check = check_correlation_matrix(&m);
            problems.extend(check.violations);
            let min = solver.eigenvalues(&m)?.min();
            if min < PSD_THRESHOLD {
                problems.push(format!(
                    "minimum eigenvalue {min:e} is below {PSD_THRESHOLD:e}"
                ));
            }
            Some(min)
        }
        Err(e @ Error::NotSymmetric { .. }) => {
            problems.push(format!("not symmetric: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    Ok(Diagnostics {
        dim,
        max_asymmetry,
        max_diagonal_deviation,
        max_abs_off_diagonal,
        min_eigenvalue,
        problems,
    })
}

fn run_validate(cfg: &RunConfig) -> Result<Rendered, Error> {
    let path = &cfg.input_paths[0];
    let kind = resolve_kind(cfg, path)?;
    let (dim, full) = match kind {
        InputKind::Matrix => read_square(path)?,
        InputKind::Data => {
            let r = correlation_matrix(&read_csv_data(path, cfg.columns.as_deref(), cfg.drop_na)?)?;
            (
                r.dim(),
                (0..r.dim()).flat_map(|i| r.row(i).to_vec()).collect(),
            )
        }
    };
    let diag = diagnose(dim, &full, &solver(cfg))?;
    let valid = diag.problems.is_empty();
    let stdout = match cfg.output_format {
        OutputFormat::Json => output::envelope(
            "validate",
            json!({ "path": path_str(path), "as": kind.name() }),
            json!({
                "dim": diag.dim,
                "valid": valid,
                "symmetric": diag.max_asymmetry <= SYMMETRY_TOLERANCE,
                "max_asymmetry": output::num(diag.max_asymmetry),
                "max_diagonal_deviation": output::num(diag.max_diagonal_deviation),
                "max_abs_off_diagonal": output::num(diag.max_abs_off_diagonal),
                "min_eigenvalue": diag.min_eigenvalue.map_or(Value::Null, output::num),
                "psd": diag.min_eigenvalue.map(|m| m >= PSD_THRESHOLD),
                "problems": diag.problems,
            }),
            &[],
        ),
        OutputFormat::Text => {
            let mut s = format!(
                "{}\n  dimension:              {}\n",
                path_str(path),
                diag.dim
            );
            s.push_str(&format!(
                "  max asymmetry:          {:e}\n",
                diag.max_asymmetry
            ));
            s.push_str(&format!(
                "  max diagonal deviation: {:e}\n",
                diag.max_diagonal_deviation
            ));
            s.push_str(&format!(
                "  max |off-diagonal|:     {:.4}\n",
                diag.max_abs_off_diagonal
            ));
            match diag.min_eigenvalue {
                Some(m) => s.push_str(&format!("  min eigenvalue:         {m:.4e}\n")),
                None => s.push_str("  min eigenvalue:         n/a\n"),
            }
            s.push_str(if valid {
                "  valid correlation matrix\n"
            } else {
                "  NOT a valid correlation matrix\n"
            });
            for p in &diag.problems {
                s.push_str(&format!("  problem: {p}\n"));
            }
            s
        }
    };
    Ok(Rendered {
        stdout,
        failure: diag
            .problems
            .first()
            .map(|p| Error::NotACorrelationMatrix { reason: p.clone() }),
    })
}

fn error_line(code: &str, detail: &str) -> String {
    // one line, whatever the detail contains
    format!("error: {code}: {}\n", detail.replace(['\n', '\r'], " "))
}

/// Executes `cfg`, writing the report to `out` and any error line to `err`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cfg.command {
        Command::Compute => run_single(cfg, InputKind::Data),
        Command::Matrix => run_single(cfg, InputKind::Matrix),
        Command::Compare => run_compare(cfg),
        Command::Simulate => run_simulate(cfg),
        Command::Validate => run_validate(cfg),
    };
    let (stdout, failure) = match result {
        Ok(r) => (r.stdout, r.failure),
        Err(e) => (String::new(), Some(e)),
    };
    if out
        .write_all(stdout.as_bytes())
        .and_then(|_| out.flush())
        .is_err()
    {
        let _ = err.write_all(error_line("IO_ERROR", "cannot write to standard output").as_bytes());
        return EXIT_DOMAIN;
    }
    match failure {
        None => EXIT_OK,
        Some(e) => {
            let _ = err.write_all(error_line(e.code(), &e.to_string()).as_bytes());
            EXIT_DOMAIN
        }
    }
}

/// Full command line handling: parse, run, report. Returns the process exit code.
pub fn main_with_args<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cfg) => run(&cfg, out, err),
        Err(ArgsError::Info(text)) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(ArgsError::Usage(msg)) => {
            let _ = err.write_all(error_line("USAGE", &msg).as_bytes());
            EXIT_USAGE
        }
    }
}
