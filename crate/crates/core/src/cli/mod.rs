//! The `kpbbm` command-line front end.
//!
//! Every analysis is a subcommand writing JSON (or CSV where tabular).
//! Artifacts go to `--output-dir` when given, otherwise to standard output.
//! Exit codes: `0` success, `1` validation or usage error, `2` verification
//! failure (a residual that the toolkit itself claims vanishes does not).
//! Discrepancies of externally quoted closed forms are reported in the output
//! but are not verification failures.

mod commands;
mod config;
mod reproduce;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::expr::{parse_rational, Rational};
use crate::kpbbm::Params;
use crate::numerics::TimeScheme;
use crate::solutions::Family;

pub use config::{merge_config, parse_config};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for invalid input (usage, parameters, domain errors).
pub const EXIT_VALIDATION: i32 = 1;
/// Exit code for a failed verification.
pub const EXIT_VERIFICATION: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => EXIT_VERIFICATION,
            _ => EXIT_VALIDATION,
        }
    }
}

/// Lift library errors into validation errors.
pub(crate) fn invalid<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Validation(e.to_string())
}

pub(crate) fn parse_rat(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number (use p, p/q or a decimal such as -0.25)"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Etdrk4,
    IfRk4,
    Rk4,
}

impl From<SchemeArg> for TimeScheme {
    fn from(s: SchemeArg) -> TimeScheme {
        match s {
            SchemeArg::Etdrk4 => TimeScheme::Etdrk4,
            SchemeArg::IfRk4 => TimeScheme::IntegratingFactorRk4,
            SchemeArg::Rk4 => TimeScheme::Rk4,
        }
    }
}

/// Symbolic-numeric toolkit for (u_t + u_x + a(u²)_x + b u_xxt)_x + k u_yy = 0.
#[derive(Debug, Parser)]
#[command(name = "kpbbm", version, about, allow_negative_numbers = true)]
pub struct Cli {
    /// Directory for artifacts (printed to stdout when omitted).
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Seed for every randomized step (zero-test points, multi-start, sampling).
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Config file with `key = value` lines mirroring the long flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

/// Equation coefficients as exact rationals (`p`, `p/q` or decimals).
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
    pub a: Rational,
    #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
    pub b: Rational,
    #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
    pub k: Rational,
}

impl ParamArgs {
    pub fn params(&self) -> Result<Params, CliError> {
        Params::new(self.a.clone(), self.b.clone(), self.k.clone()).map_err(invalid)
    }
}

/// Selects one closed-form solution.
#[derive(Debug, Clone, Args)]
pub struct SolutionArgs {
    /// sr1, sr2, sr3, hb or tanh.
    #[arg(long)]
    pub family: Family,
    /// Slope λ of the phase (similarity and tanh families).
    #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
    pub lambda: Rational,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Wavenumber α (homogeneous balance).
    #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
    pub alpha: Rational,
    /// Background u₁ (homogeneous balance).
    #[arg(long, default_value = "0", value_parser = parse_rat, allow_hyphen_values = true)]
    pub u1: Rational,
    /// Phase shift θ₀ (homogeneous balance).
    #[arg(long, default_value = "0", value_parser = parse_rat, allow_hyphen_values = true)]
    pub theta0: Rational,
    /// Sign of β = ±√β² (homogeneous balance).
    #[arg(long, value_enum, default_value_t = Branch::Plus)]
    pub branch: Branch,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum SolutionCommand {
    /// Build a solution and verify its residual.
    Build(SolutionArgs),
    /// Sample u(x) along a line of fixed y and t.
    Profile {
        #[command(flatten)]
        solution: SolutionArgs,
        #[command(flatten)]
        profile: ProfileArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular-expansion analysis: leading order, resonances, compatibility.
    Painleve(ParamArgs),
    /// Solve the determining equations for point symmetries.
    Symmetries {
        #[command(flatten)]
        params: ParamArgs,
        /// Total degree of the polynomial ansatz (1..=3).
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Commutator table, adjoint action, derived series and invariants.
    Algebra {
        /// Maximal degree of the invariant ansatz.
        #[arg(long, default_value_t = 4)]
        invariant_degree: usize,
    },
    /// Map elements a₁G1 + … + a₄G4 to the optimal list.
    Classify {
        /// One element as a comma-separated list, e.g. 0,0,1,1.
        #[arg(long, value_delimiter = ',', value_parser = parse_rat, allow_hyphen_values = true)]
        element: Option<Vec<Rational>>,
        /// CSV file with one element per line (a1,a2,a3,a4).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Classify this many seeded random rational elements.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Closed-form solutions.
    #[command(subcommand)]
    Solution(SolutionCommand),
    /// Tanh method for u = f(x − λy − ωt).
    Tanh {
        #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
        lambda: Rational,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Homogeneous balance u = ∂²ₓ ln(1 + e^θ) + u₁.
    Hb {
        #[arg(long, default_value = "1", value_parser = parse_rat, allow_hyphen_values = true)]
        alpha: Rational,
        #[arg(long, default_value = "0", value_parser = parse_rat, allow_hyphen_values = true)]
        u1: Rational,
        #[arg(long, default_value = "0", value_parser = parse_rat, allow_hyphen_values = true)]
        theta0: Rational,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Evolve a closed-form wave with the spectral integrator and compare.
    Simulate {
        #[command(flatten)]
        solution: SolutionArgs,
        #[arg(long, default_value_t = 160)]
        nx: usize,
        /// Box length along x (default 13π).
        #[arg(long)]
        lx: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        t_end: f64,
        #[arg(long, default_value_t = 0.0025)]
        dt: f64,
        #[arg(long, default_value_t = 40)]
        snapshots: usize,
        #[arg(long, value_enum, default_value_t = SchemeArg::Etdrk4)]
        scheme: SchemeArg,
        /// Write every grid row to the snapshot CSV (default: the row y = 0).
        #[arg(long)]
        all_rows: bool,
        /// Largest acceptable max-norm error against the exact translate.
        #[arg(long, default_value_t = 1e-3)]
        error_tolerance: f64,
        /// Largest acceptable relative error of the measured speed.
        #[arg(long, default_value_t = 0.01)]
        speed_tolerance: f64,
    },
    /// Regenerate all figure data and the full verification report.
    Reproduce {
        /// Skip the spectral soliton run (the slowest step).
        #[arg(long)]
        skip_simulation: bool,
    },
}

/// Where artifacts go.
pub struct Sink<'a> {
    pub out: &'a mut dyn Write,
    pub dir: Option<PathBuf>,
    pub written: Vec<PathBuf>,
}

impl Sink<'_> {
    /// Write `content` as `name` into the output directory, or to stdout.
    pub fn emit(&mut self, name: &str, content: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(dir) => {
                let io = |e: std::io::Error, p: &std::path::Path| CliError::Io { path: p.display().to_string(), source: e };
                std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
                let path = dir.join(name);
                if let Some(parent) = path.parent() {
                    std::fs::create_dir_all(parent).map_err(|e| io(e, parent))?;
                }
                std::fs::write(&path, content).map_err(|e| io(e, &path))?;
                let _ = writeln!(self.out, "{}", path.display());
                self.written.push(path);
            }
            None => {
                let _ = self.out.write_all(content.as_bytes());
                if !content.ends_with('\n') {
                    let _ = writeln!(self.out);
                }
            }
        }
        Ok(())
    }

    pub fn emit_json(&mut self, name: &str, v: &serde_json::Value) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(v).map_err(invalid)?;
        self.emit(name, &text)
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run_with(argv: Vec<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VALIDATION;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_VALIDATION,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut sink = Sink { out, dir: cli.output_dir.clone(), written: Vec::new() };
    match commands::dispatch(&cli, &mut sink) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Run with the process arguments and standard streams.
pub fn run(argv: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}
