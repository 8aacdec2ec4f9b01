//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eulerpoly::{gen_euler_recursive, gen_euler_series, CoefficientRow};
use crate::exactnum::{format_rational, parse_rational, ExactRational};
use crate::identities::{reconstruct_euler_with_budget, ReconstructionReport, DEFAULT_TERM_BUDGET};
use crate::probnum::{
    cross_validate, probnum_catalan_table, probnum_series, probnum_trig, CrossValidation, Method,
    ProbRow, ProbTable,
};
use crate::stochastic::{
    mc_euler_poly, mc_gen_euler, mc_klebanov, moment_integral_check, MomentReport, RandomStream,
    DEFAULT_BAND,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "CHEBYEULER_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "chebyeuler",
    version,
    about = "Probability numbers, Euler polynomials and identity checks"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate p_ell^(N), optionally cross-validating all three methods.
    Probnums(ProbnumArgs),
    /// Rebuild E_n(x) from generalized Euler polynomials weighted by p_k^(N).
    Identity(IdentityArgs),
    /// Monte Carlo and quadrature checks.
    Montecarlo(MonteCarloArgs),
    /// Coefficients of the generalized Euler polynomial E_n^(p)(x).
    Euler(EulerArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Pretty,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "pretty")]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Series,
    Trig,
    Catalan,
    All,
}

#[derive(Debug, Args)]
pub struct ProbnumArgs {
    #[arg(long = "N")]
    pub big_n: usize,
    #[arg(long)]
    pub max_ell: usize,
    #[arg(long, value_enum, default_value = "series")]
    pub method: MethodArg,
    /// Allowed |series - trig| when cross-validating.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "N")]
    pub big_n: usize,
    /// Rational point, "a" or "a/b".
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Largest order k summed before reporting non-convergence.
    #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
    pub max_k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McCheck {
    /// E_n(x) = E (x - 1/2 + iL)^n
    Rep,
    /// E_n^(p)(x) = E (x + sum_j (iL_j - 1/2))^n
    Gen,
    /// moments of (1/N) sum_{j <= mu_N} L_j against sech(pi x)
    Klebanov,
    /// quadrature of t^k sech(pi t)
    Integral,
}

#[derive(Debug, Args)]
pub struct MonteCarloArgs {
    #[arg(value_enum)]
    pub check: McCheck,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub x: String,
    #[arg(long = "N", default_value_t = 2)]
    pub big_n: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, env = SEED_ENV, default_value_t = 42)]
    pub seed: u64,
    /// Acceptance band in standard errors.
    #[arg(long, default_value_t = DEFAULT_BAND)]
    pub band: f64,
    /// Quadrature tolerance for the integral check.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EulerMethod {
    Recursive,
    Series,
}

#[derive(Debug, Args)]
pub struct EulerArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub p: u64,
    #[arg(long, value_enum, default_value = "recursive")]
    pub method: EulerMethod,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(&config, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_CHECK_FAILED
            }
        }
    }
}

fn dispatch(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match &config.command {
        Command::Probnums(a) => cmd_probnums(a, stdout, stderr),
        Command::Identity(a) => cmd_identity(a, stdout, stderr),
        Command::Montecarlo(a) => cmd_montecarlo(a, stdout, stderr),
        Command::Euler(a) => cmd_euler(a, stdout),
    }
}

/// Writes `body` to `--out` if given, else to `stdout`.
fn emit(output: &OutputArgs, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match &output.out {
        Some(path) => File::create(path)?.write_all(body)?,
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn to_json<T: Serialize>(doc: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s.into_bytes())
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Io(e.to_string()))
}

fn parse_x(s: &str) -> Result<ExactRational> {
    parse_rational(s)
}

#[derive(Debug, Serialize)]
struct TableDoc {
    method: Method,
    tail_bound: f64,
    rows: Vec<ProbRow>,
}

impl TableDoc {
    fn from_table(t: &ProbTable) -> Self {
        TableDoc {
            method: t.method,
            tail_bound: t.tail_bound,
            rows: support_rows(t),
        }
    }
}

fn support_rows(t: &ProbTable) -> Vec<ProbRow> {
    t.rows()
        .into_iter()
        .filter(|r| t.in_support(r.ell))
        .collect()
}

#[derive(Debug, Serialize)]
struct ProbnumsDoc {
    schema_version: u32,
    command: &'static str,
    #[serde(rename = "N")]
    big_n: usize,
    max_ell: usize,
    tables: Vec<TableDoc>,
    cross_validation: Option<CrossValidation>,
}

pub fn cmd_probnums(
    a: &ProbnumArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let tables = match a.method {
        MethodArg::Series => vec![probnum_series(a.big_n, a.max_ell)?],
        MethodArg::Trig => vec![probnum_trig(a.big_n, a.max_ell)?],
        MethodArg::Catalan => vec![probnum_catalan_table(a.big_n, a.max_ell)?],
        MethodArg::All => vec![
            probnum_series(a.big_n, a.max_ell)?,
            probnum_trig(a.big_n, a.max_ell)?,
            probnum_catalan_table(a.big_n, a.max_ell)?,
        ],
    };
    let (validation, failure) = if a.method == MethodArg::All {
        match cross_validate(a.big_n, a.max_ell, a.tol) {
            Ok(v) => (Some(v), None),
            Err(e @ Error::Validation { .. }) => (None, Some(e)),
            Err(e) => return Err(e),
        }
    } else {
        (None, None)
    };

    let body = match a.output.format {
        Format::Csv => to_csv(&support_rows(&tables[0]))?,
        Format::Json => to_json(&ProbnumsDoc {
            schema_version: SCHEMA_VERSION,
            command: "probnums",
            big_n: a.big_n,
            max_ell: a.max_ell,
            tables: tables.iter().map(TableDoc::from_table).collect(),
            cross_validation: validation.clone(),
        })?,
        Format::Pretty => {
            let mut s = String::new();
            for t in &tables {
                s.push_str(&format!(
                    "p_ell^({}) by {} (tail bound {:e})\n",
                    t.n,
                    t.method.name(),
                    t.tail_bound
                ));
                for r in support_rows(t) {
                    s.push_str(&format!(
                        "  {:>5}  {:>24}  {}\n",
                        r.ell,
                        r.exact.as_deref().unwrap_or("-"),
                        r.float
                    ));
                }
            }
            if let Some(v) = &validation {
                s.push_str(&format!(
                    "cross-validation passed: series = catalan exactly, max |series - trig| = {:e} at ell = {}\n",
                    v.max_trig_deviation, v.worst_ell
                ));
            }
            s.into_bytes()
        }
    };
    emit(&a.output, stdout, &body)?;
    if let Some(e) = failure {
        writeln!(stderr, "error: {e}")?;
        return Ok(EXIT_CHECK_FAILED);
    }
    if let (Some(v), Format::Csv) = (&validation, a.output.format) {
        writeln!(
            stderr,
            "max trig deviation {:e} at ell = {}",
            v.max_trig_deviation, v.worst_ell
        )?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct IdentityDoc {
    schema_version: u32,
    command: &'static str,
    passed: bool,
    result: ReconstructionReport,
}

pub fn cmd_identity(
    a: &IdentityArgs,
    stdout: &mut dyn Write,
    _stderr: &mut dyn Write,
) -> Result<i32> {
    let x = parse_x(&a.x)?;
    let result = reconstruct_euler_with_budget(a.n, a.big_n, &x, a.tol, a.max_k)?;
    let report = result.to_report(a.tol);
    let passed = result.abs_error <= a.tol;
    let body = match a.output.format {
        Format::Csv => to_csv(std::slice::from_ref(&report))?,
        Format::Json => to_json(&IdentityDoc {
            schema_version: SCHEMA_VERSION,
            command: "identity",
            passed,
            result: report,
        })?,
        Format::Pretty => format!(
            "E_{n}({x}) = {target}\npartial sum over {terms} terms (k <= {k}, N = {big_n}): {value}\nabs error {err:e} (tol {tol:e}), tail estimate {tail:e}\n",
            n = report.n,
            x = report.x,
            target = report.target,
            terms = report.terms_used,
            k = report.last_k,
            big_n = report.big_n,
            value = report.partial_value,
            err = report.abs_error,
            tol = report.tol,
            tail = report.tail_estimate,
        )
        .into_bytes(),
    };
    emit(&a.output, stdout, &body)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Debug, Serialize)]
struct MonteCarloDoc {
    schema_version: u32,
    command: &'static str,
    check: &'static str,
    seed: Option<u64>,
    band: f64,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<MomentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral: Option<IntegralDoc>,
}

#[derive(Debug, Clone, Serialize)]
struct IntegralDoc {
    k: usize,
    deviation: f64,
    tol: f64,
}

#[derive(Debug, Serialize)]
struct EstimateRow<'a> {
    label: &'a str,
    empirical: f64,
    standard_error: f64,
    reference: f64,
    reference_exact: &'a str,
    standardized_deviation: f64,
}

fn check_name(c: McCheck) -> &'static str {
    match c {
        McCheck::Rep => "rep",
        McCheck::Gen => "gen",
        McCheck::Klebanov => "klebanov",
        McCheck::Integral => "integral",
    }
}

pub fn cmd_montecarlo(
    a: &MonteCarloArgs,
    stdout: &mut dyn Write,
    _stderr: &mut dyn Write,
) -> Result<i32> {
    if !(a.band > 0.0) {
        return Err(Error::param("band must be positive"));
    }
    let stream = RandomStream::new(a.seed, 0);
    let (report, integral) = match a.check {
        McCheck::Rep => (
            Some(mc_euler_poly(&stream, a.n, &parse_x(&a.x)?, a.samples)?),
            None,
        ),
        McCheck::Gen => (
            Some(mc_gen_euler(&stream, a.n, a.p, &parse_x(&a.x)?, a.samples)?),
            None,
        ),
        McCheck::Klebanov => (Some(mc_klebanov(&stream, a.big_n, a.samples)?), None),
        McCheck::Integral => {
            let deviation = moment_integral_check(a.k)?;
            let tol = if a.k % 2 == 1 {
                a.tol.min(1e-12)
            } else {
                a.tol
            };
            (
                None,
                Some(IntegralDoc {
                    k: a.k,
                    deviation,
                    tol,
                }),
            )
        }
    };
    let passed = match (&report, &integral) {
        (Some(r), _) => r.passes(a.band),
        (None, Some(i)) => i.deviation <= i.tol,
        (None, None) => unreachable!(),
    };

    let body = match a.output.format {
        Format::Csv => match (&report, &integral) {
            (Some(r), _) => to_csv(
                &r.estimates
                    .iter()
                    .map(|e| EstimateRow {
                        label: &e.label,
                        empirical: e.empirical,
                        standard_error: e.standard_error,
                        reference: e.reference,
                        reference_exact: &e.reference_exact,
                        standardized_deviation: e.standardized_deviation,
                    })
                    .collect::<Vec<_>>(),
            )?,
            (None, Some(i)) => to_csv(std::slice::from_ref(i))?,
            (None, None) => unreachable!(),
        },
        Format::Json => to_json(&MonteCarloDoc {
            schema_version: SCHEMA_VERSION,
            command: "montecarlo",
            check: check_name(a.check),
            seed: report.as_ref().map(|_| a.seed),
            band: a.band,
            passed,
            report: report.clone(),
            integral: integral.clone(),
        })?,
        Format::Pretty => {
            let mut s = String::new();
            if let Some(r) = &report {
                s.push_str(&format!(
                    "{} check, {} samples, seed {}\n",
                    check_name(a.check),
                    r.sample_size,
                    a.seed
                ));
                for e in &r.estimates {
                    s.push_str(&format!(
                        "  {:<4} empirical {:>14.8}  se {:.3e}  reference {:>14.8}  z {:+.3}\n",
                        e.label,
                        e.empirical,
                        e.standard_error,
                        e.reference,
                        e.standardized_deviation
                    ));
                }
                if let Some(ks) = &r.ks {
                    s.push_str(&format!(
                        "  two-sample KS {:.5} (1% critical {:.5})\n",
                        ks.statistic, ks.critical_1pct
                    ));
                }
                if r.overflow_events > 0 {
                    s.push_str(&format!(
                        "  mu_N draws beyond table: {}\n",
                        r.overflow_events
                    ));
                }
            }
            if let Some(i) = &integral {
                s.push_str(&format!(
                    "integral of t^{} sech(pi t): deviation {:e} (tol {:e})\n",
                    i.k, i.deviation, i.tol
                ));
            }
            s.push_str(if passed { "PASS\n" } else { "FAIL\n" });
            s.into_bytes()
        }
    };
    emit(&a.output, stdout, &body)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Debug, Serialize)]
struct EulerDoc {
    schema_version: u32,
    command: &'static str,
    n: usize,
    p: u64,
    coefficients: Vec<CoefficientRow>,
}

pub fn cmd_euler(a: &EulerArgs, stdout: &mut dyn Write) -> Result<i32> {
    let poly = match a.method {
        EulerMethod::Recursive => gen_euler_recursive(a.n, a.p),
        EulerMethod::Series => gen_euler_series(a.n, a.p),
    };
    let rows = poly.rows();
    let body = match a.output.format {
        Format::Csv => to_csv(&rows)?,
        Format::Json => to_json(&EulerDoc {
            schema_version: SCHEMA_VERSION,
            command: "euler",
            n: a.n,
            p: a.p,
            coefficients: rows,
        })?,
        Format::Pretty => {
            let terms: Vec<String> = poly
                .coeffs()
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(j, c)| format!("({}) x^{j}", format_rational(c)))
                .collect();
            format!("E_{}^({})(x) = {}\n", a.n, a.p, terms.join(" + ")).into_bytes()
        }
    };
    emit(&a.output, stdout, &body)?;
    Ok(EXIT_OK)
}

/// Entry point used by the binary.
pub fn main_with_std() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
