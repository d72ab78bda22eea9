//! `hprog` command line: `hp`, `verify`, `decompose` and `series`.
//!
//! Everything returns an [`Outcome`] instead of printing so the commands can
//! be exercised in-process.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::hp::{
    hpk_cosine, hpk_exponential, hpk_integer, hpk_real_shift, hpk_sine, MethodReport,
    ReportRecord,
};
use crate::quadrature::DEFAULT_TOL;
use crate::rational::{min_pairwise_distance, sum_reciprocal_poly, Polynomial};
use crate::scalar::{hp_direct, HPParams};
use crate::series::{
    pk_closed_form, pk_from_generating, pk_from_recurrence, qk_from_recurrence, trig_taylor_coeff,
    TrigGenerator, UPolynomial,
};
use crate::verify::{self, Suite};
use crate::{ComplexScalar, Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_VALIDITY: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

pub const MIN_TOL: f64 = 1e-14;
pub const MAX_TOL: f64 = 1e-2;

#[derive(Debug, Parser)]
#[command(name = "hprog", version, about = "Partial sums of generalized harmonic progressions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Σ_{j=1..n} 1/(a·i·j + b)^k
    Hp(HpArgs),
    /// Run a verification sweep
    Verify(VerifyArgs),
    /// Sum 1/p(j) for j = 1..n through partial fractions
    Decompose(DecomposeArgs),
    /// Print the u-polynomial coefficients of a generating series
    Series(SeriesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MethodChoice {
    Auto,
    Direct,
    Exp,
    RealShift,
    Cos,
    Sin,
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodChoice,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Drop vanishing terms instead of failing
    #[arg(long)]
    pub skip_singular: bool,
}

impl Default for CliConfig {
    fn default() -> Self {
        Self {
            method: MethodChoice::Auto,
            tol: DEFAULT_TOL,
            output: OutputFormat::Json,
            skip_singular: false,
        }
    }
}

impl CliConfig {
    pub fn check(&self) -> Result<()> {
        if !(MIN_TOL..=MAX_TOL).contains(&self.tol) {
            return Err(Error::InvalidArgument(format!(
                "--tol {} outside [{MIN_TOL:e}, {MAX_TOL:e}]",
                self.tol
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
pub struct HpArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: i64,
    /// Real part of b
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    /// Imaginary part of b
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bi: f64,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub config: CliConfig,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteChoice,
    #[command(flatten)]
    pub config: CliConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteChoice {
    Oracle,
    Series,
    Lagrange,
    Singular,
    All,
}

impl From<SuiteChoice> for Suite {
    fn from(s: SuiteChoice) -> Self {
        match s {
            SuiteChoice::Oracle => Suite::Oracle,
            SuiteChoice::Series => Suite::Series,
            SuiteChoice::Lagrange => Suite::Lagrange,
            SuiteChoice::Singular => Suite::Singular,
            SuiteChoice::All => Suite::All,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    /// Real parts of the coefficients, constant term first
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub coeffs: Vec<f64>,
    /// Imaginary parts of the coefficients, same order
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub coeffs_im: Vec<f64>,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub config: CliConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SeriesRoute {
    Recurrence,
    Generating,
    Closed,
    CosF,
    CosG,
    SinF,
    SinG,
    /// Cosine-route q_k recurrence
    Q,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub bi: f64,
    #[arg(long, value_enum, default_value = "closed")]
    pub route: SeriesRoute,
}

/// Exit code plus what would go to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(err: &Error) -> Self {
        Self {
            code: EXIT_VALIDITY,
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
        }
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Hp(args) => cmd_hp(args.a, args.b, args.bi, args.k, args.n, &args.config),
        Command::Verify(args) => cmd_verify(args.suite.into(), &args.config),
        Command::Decompose(args) => cmd_decompose(&args.coeffs, &args.coeffs_im, args.n, &args.config),
        Command::Series(args) => cmd_series(args.k, ComplexScalar::new(args.b, args.bi), args.route),
    }
}

fn real_text(x: f64) -> String {
    if x == 0.0 || (1e-4..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn complex_text(re: f64, im: f64) -> String {
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{} {sign} {}i", real_text(re), real_text(im.abs()))
}

fn pair(z: ComplexScalar) -> [f64; 2] {
    [z.re, z.im]
}

fn real_integer(b: ComplexScalar) -> Option<i64> {
    (b.im == 0.0 && b.re.fract() == 0.0 && b.re.abs() < 2f64.powi(53)).then_some(b.re as i64)
}

fn evaluate(a: i64, b: ComplexScalar, k: u32, n: u64, config: &CliConfig) -> Result<MethodReport> {
    let integer = |note: Option<&str>| -> Result<MethodReport> {
        let bi = real_integer(b).ok_or_else(|| {
            Error::Validity(format!("integer fallback needs an integer b, got {b}"))
        })?;
        let mut report = hpk_integer(a, bi, k, n, config.tol, config.skip_singular)?;
        report
            .validity_notes
            .push(format!("integer fallback evaluates Σ 1/({a}j + {bi})^{k}"));
        if let Some(note) = note {
            report.validity_notes.insert(0, note.to_string());
        }
        Ok(report)
    };
    match config.method {
        MethodChoice::Direct => {
            let params = HPParams::new(a, b, k, n)?;
            Ok(MethodReport::direct(hp_direct(&params, config.skip_singular)?))
        }
        MethodChoice::Exp => hpk_exponential(&HPParams::new(a, b, k, n)?, config.tol),
        MethodChoice::RealShift | MethodChoice::Cos | MethodChoice::Sin => {
            let eval = match config.method {
                MethodChoice::RealShift => hpk_real_shift,
                MethodChoice::Cos => hpk_cosine,
                _ => hpk_sine,
            };
            let mut report = eval(b, k, n, config.tol)?;
            report
                .validity_notes
                .push(format!("shift formulas evaluate Σ 1/(j + b)^{k}; --a is ignored"));
            Ok(report)
        }
        MethodChoice::Integer => integer(None),
        MethodChoice::Auto => {
            let params = HPParams::new(a, b, k, n)?;
            if params.valid_exp() {
                hpk_exponential(&params, config.tol)
            } else if real_integer(b).is_some() {
                integer(Some("i·b/a is an integer; routed to the integer fallback"))
            } else {
                Err(Error::Validity(format!(
                    "i·b/a = {} is an integer and b is not a real integer; no formula applies",
                    crate::I * b / a as f64
                )))
            }
        }
    }
}

fn render_report(record: &ReportRecord, format: OutputFormat) -> String {
    let opt = |x: Option<String>| x.unwrap_or_default();
    match format {
        OutputFormat::Json => serde_json::to_string(record).expect("report serializes") + "\n",
        OutputFormat::Csv => format!(
            "value_re,value_im,method,quad_error,evals\n{:e},{:e},{},{},{}\n",
            record.value[0],
            record.value[1],
            record.method.name(),
            opt(record.quad_error.map(|e| format!("{e:e}"))),
            opt(record.evals.map(|e| e.to_string())),
        ),
        OutputFormat::Plain => {
            let mut s = format!(
                "{}  [{}]\n",
                complex_text(record.value[0], record.value[1]),
                record.method.name()
            );
            if let Some(e) = record.quad_error {
                s += &format!("quadrature error {e:.3e} in {} evaluations\n", record.evals.unwrap_or(0));
            }
            for note in &record.notes {
                s += &format!("note: {note}\n");
            }
            s
        }
    }
}

pub fn cmd_hp(a: i64, b_re: f64, b_im: f64, k: u32, n: u64, config: &CliConfig) -> Outcome {
    if let Err(e) = config.check() {
        return Outcome::error(&e);
    }
    match evaluate(a, ComplexScalar::new(b_re, b_im), k, n, config) {
        Ok(report) => {
            let stdout = render_report(&report.record(), config.output);
            if report.converged() {
                Outcome::ok(stdout)
            } else {
                Outcome {
                    code: EXIT_NO_CONVERGENCE,
                    stdout,
                    stderr: "error: quadrature did not reach the requested tolerance\n".into(),
                }
            }
        }
        Err(e) => Outcome::error(&e),
    }
}

pub fn cmd_verify(suite: Suite, config: &CliConfig) -> Outcome {
    if let Err(e) = config.check() {
        return Outcome::error(&e);
    }
    let reports = verify::run(suite, config.tol);
    let passed = reports.iter().all(|r| r.passed());
    let stdout = match config.output {
        OutputFormat::Json => serde_json::to_string(&reports).expect("report serializes") + "\n",
        OutputFormat::Csv => {
            let mut s = "family,cases,max_residual,bound,passed\n".to_string();
            for f in reports.iter().flat_map(|r| &r.families) {
                s += &format!("{},{},{:e},{:e},{}\n", f.family, f.cases, f.max_residual, f.bound, f.passed);
            }
            s
        }
        OutputFormat::Plain => {
            let mut s = String::new();
            for f in reports.iter().flat_map(|r| &r.families) {
                s += &format!(
                    "{} {:<36} cases={:<4} max={:.3e} bound={:.0e}\n",
                    if f.passed { "PASS" } else { "FAIL" },
                    f.family,
                    f.cases,
                    f.max_residual,
                    f.bound
                );
                for failure in &f.failures {
                    s += &format!("     {failure}\n");
                }
            }
            s
        }
    };
    Outcome {
        code: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
        stdout,
        stderr: String::new(),
    }
}

/// Serialized `decompose` result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub roots: Vec<[f64; 2]>,
    pub weights: Vec<[f64; 2]>,
    pub sum: [f64; 2],
    pub diagnostics: DecomposeDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeDiagnostics {
    pub degree: usize,
    pub min_root_gap: Option<f64>,
    pub quad_error: Option<f64>,
    pub evals: Option<usize>,
    pub converged: bool,
    pub notes: Vec<String>,
}

pub fn decompose(coeffs: &[f64], coeffs_im: &[f64], n: u64, config: &CliConfig) -> Result<Decomposition> {
    config.check()?;
    if coeffs_im.len() > coeffs.len() {
        return Err(Error::InvalidArgument(
            "--coeffs-im has more entries than --coeffs".into(),
        ));
    }
    let complex: Vec<ComplexScalar> = coeffs
        .iter()
        .enumerate()
        .map(|(i, &re)| ComplexScalar::new(re, coeffs_im.get(i).copied().unwrap_or(0.0)))
        .collect();
    let p = Polynomial::new(complex)?;
    if p.degree() == 0 {
        return Err(Error::InvalidArgument("polynomial must have degree >= 1".into()));
    }
    let sum = sum_reciprocal_poly(&p, n, config.tol, config.skip_singular)?;
    let roots: Vec<ComplexScalar> = sum.terms.iter().map(|t| t.root).collect();
    let record = sum.report.record();
    Ok(Decomposition {
        roots: roots.iter().map(|&r| pair(r)).collect(),
        weights: sum.terms.iter().map(|t| pair(t.weight)).collect(),
        sum: record.value,
        diagnostics: DecomposeDiagnostics {
            degree: p.degree(),
            min_root_gap: min_pairwise_distance(&roots).map(|(gap, _)| gap),
            quad_error: record.quad_error,
            evals: record.evals,
            converged: sum.report.converged(),
            notes: record.notes,
        },
    })
}

pub fn cmd_decompose(coeffs: &[f64], coeffs_im: &[f64], n: u64, config: &CliConfig) -> Outcome {
    match decompose(coeffs, coeffs_im, n, config) {
        Ok(d) => {
            let code = if d.diagnostics.converged { EXIT_OK } else { EXIT_NO_CONVERGENCE };
            let stdout = match config.output {
                OutputFormat::Csv => {
                    let mut s = "kind,re,im\n".to_string();
                    for r in &d.roots {
                        s += &format!("root,{:e},{:e}\n", r[0], r[1]);
                    }
                    for w in &d.weights {
                        s += &format!("weight,{:e},{:e}\n", w[0], w[1]);
                    }
                    s + &format!("sum,{:e},{:e}\n", d.sum[0], d.sum[1])
                }
                OutputFormat::Plain => {
                    let mut s = String::new();
                    for (r, w) in d.roots.iter().zip(&d.weights) {
                        s += &format!("root {}  weight {}\n", complex_text(r[0], r[1]), complex_text(w[0], w[1]));
                    }
                    s + &format!("sum {}\n", complex_text(d.sum[0], d.sum[1]))
                }
                OutputFormat::Json => serde_json::to_string(&d).expect("report serializes") + "\n",
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome::error(&e),
    }
}

pub fn series_coefficients(k: usize, b: ComplexScalar, route: SeriesRoute) -> Result<UPolynomial> {
    let trig = |which| trig_taylor_coeff(which, k, b);
    match route {
        SeriesRoute::Recurrence => pk_from_recurrence(k, b),
        SeriesRoute::Generating => pk_from_generating(k, b),
        SeriesRoute::Closed => pk_closed_form(k, b),
        SeriesRoute::CosF => trig(TrigGenerator::CosF),
        SeriesRoute::CosG => trig(TrigGenerator::CosG),
        SeriesRoute::SinF => trig(TrigGenerator::SinF),
        SeriesRoute::SinG => trig(TrigGenerator::SinG),
        SeriesRoute::Q => qk_from_recurrence(k, b),
    }
}

pub fn cmd_series(k: usize, b: ComplexScalar, route: SeriesRoute) -> Outcome {
    match series_coefficients(k, b, route) {
        Ok(poly) => {
            let coefficients: Vec<[f64; 2]> = poly.coeffs().iter().map(|&z| pair(z)).collect();
            let body = json!({
                "k": k,
                "b": pair(b),
                "route": route.to_possible_value().map(|v| v.get_name().to_string()),
                "coefficients": coefficients,
            });
            Outcome::ok(body.to_string() + "\n")
        }
        Err(e) => Outcome::error(&e),
    }
}
