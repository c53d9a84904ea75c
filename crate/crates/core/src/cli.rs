//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter
//! error, 3 zero-norm state.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{expectation_exp_number, normalization, pnd_table, NMax, Truncation};
use crate::error::Error;
use crate::oracle::{oracle_exp_number, recommended_dim, FockOracle};
use crate::state::{validate_params, StateParams, Variant};
use crate::verify::{run_verify, CheckKind, VerifyConfig, VerifyReport, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ZERO_NORM: i32 = 3;

/// Sweeps larger than this are refused.
pub const MAX_SWEEP_POINTS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "sqlegendre",
    version,
    about = "Photon statistics of photon-added/subtracted squeezed thermal states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalization constant of the photon-added or photon-subtracted state.
    Norm(NormArgs),
    /// Photon-number distribution table.
    Pnd(PndArgs),
    /// Expectation of exp(f a†a) in the squeezed thermal state.
    Genfun(GenfunArgs),
    /// Run the cross-check suite; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Long-format distribution tables over a parameter grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Add,
    Sub,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Add => Variant::Added,
            VariantArg::Sub => Variant::Subtracted,
        }
    }
}

/// `auto` or a non-negative integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutoOr {
    Auto,
    Value(usize),
}

impl FromStr for AutoOr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(AutoOr::Auto);
        }
        s.parse().map(AutoOr::Value).map_err(|_| format!("expected `auto` or a non-negative integer, got {s:?}"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Mean thermal photon number.
    #[arg(long = "nc")]
    pub n_c: f64,
    /// Squeezing parameter.
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    /// Number of photons added or subtracted.
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long, value_enum, default_value = "add")]
    pub variant: VariantArg,
}

impl StateArgs {
    fn params(&self) -> Result<StateParams, Error> {
        let params = StateParams { n_c: self.n_c, r: self.r, m: self.m, variant: self.variant.into() };
        let report = validate_params(&params);
        if let Some(v) = report.violations.iter().find(|v| v.severity == crate::state::Severity::Error) {
            return Err(Error::Domain(v.message.clone()));
        }
        Ok(params)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct NormArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Also compute the normalization with the Fock-space oracle.
    #[arg(long)]
    pub with_oracle: bool,
    /// Oracle truncation (`auto` certifies by dimension doubling).
    #[arg(long, default_value = "auto")]
    pub dim: AutoOr,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PndArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Largest photon number, or `auto`.
    #[arg(long = "nmax", default_value = "auto")]
    pub n_max: AutoOr,
    #[arg(long)]
    pub with_oracle: bool,
    #[arg(long, default_value = "auto")]
    pub dim: AutoOr,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GenfunArgs {
    #[arg(long = "nc")]
    pub n_c: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    /// Exponent in exp(f a†a).
    #[arg(long, allow_negative_numbers = true)]
    pub f: f64,
    #[arg(long)]
    pub with_oracle: bool,
    #[arg(long, default_value = "auto")]
    pub dim: AutoOr,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Run only these checks (repeatable); all by default.
    #[arg(long = "check")]
    pub checks: Vec<String>,
    /// n_c values for the purification check.
    #[arg(long = "nc", value_delimiter = ',')]
    pub n_c: Vec<f64>,
    /// Upper bound on every check's threshold.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = crate::verify::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// n_c values: `a,b,c` or `start:stop:step`.
    #[arg(long = "nc")]
    pub n_c: String,
    /// r values: `a,b,c` or `start:stop:step`.
    #[arg(long, allow_hyphen_values = true)]
    pub r: String,
    /// m values: `a,b,c` or `start:stop`.
    #[arg(long, default_value = "0")]
    pub m: String,
    /// `add`, `sub` or `both`.
    #[arg(long, default_value = "add")]
    pub variant: String,
    #[arg(long = "nmax", default_value = "auto")]
    pub n_max: AutoOr,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Parses `a,b,c` or an inclusive `start:stop:step` range.
pub fn parse_float_grid(text: &str) -> Result<Vec<f64>, Error> {
    let bad = |what: &str| Error::Domain(format!("invalid grid {text:?}: {what}"));
    if text.contains(':') {
        let parts: Vec<f64> = text
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
            return Err(bad("need finite start <= stop and step > 0"));
        }
        let count = ((stop - start) / step + 1e-9).floor() + 1.0;
        if count > MAX_SWEEP_POINTS as f64 {
            return Err(bad("too many points"));
        }
        // start + i·step avoids accumulating rounding
        return Ok((0..count as usize).map(|i| start + i as f64 * step).collect());
    }
    text.split(',')
        .map(|p| {
            let v = p.trim().parse::<f64>().map_err(|_| bad("not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad("not finite"))
            }
        })
        .collect()
}

/// Parses `a,b,c` or an inclusive `start:stop`.
pub fn parse_int_grid(text: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Domain(format!("invalid integer grid {text:?}"));
    if let Some((a, b)) = text.split_once(':') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if b < a || (b - a) as usize >= MAX_SWEEP_POINTS {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    text.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

/// Formats a float so that it parses back to the same value.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsRecord {
    pub n_c: f64,
    pub r: f64,
    pub m: u32,
    pub variant: Variant,
}

impl From<&StateParams> for ParamsRecord {
    fn from(p: &StateParams) -> Self {
        ParamsRecord { n_c: p.n_c, r: p.r, m: p.m, variant: p.variant }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMeta {
    pub dim: usize,
    /// `true` when the dimension was chosen by the doubling certificate.
    pub auto: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_change: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pnd_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    #[serde(flatten)]
    pub params: ParamsRecord,
    pub norm_closed_form: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleMeta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PndRow {
    pub n: usize,
    pub pnd_closed_form: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pnd_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_diff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PndReport {
    pub params: ParamsRecord,
    pub tail_bound: f64,
    pub truncation: Truncation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleMeta>,
    pub rows: Vec<PndRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenfunReport {
    pub n_c: f64,
    pub r: f64,
    pub f: f64,
    pub exp_closed_form: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exp_oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_diff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepBlock {
    pub params: ParamsRecord,
    pub tail_bound: f64,
    pub truncation: Truncation,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedPoint {
    pub params: ParamsRecord,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub blocks: Vec<SweepBlock>,
    pub skipped: Vec<SkippedPoint>,
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io(io::Error),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::ZeroNorm(_)) => EXIT_ZERO_NORM,
            _ => EXIT_USAGE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Usage(s) => f.write_str(s),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `args` and runs the command; returns the exit code. Reports go
/// to `stdout` unless `--output` is given; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let (text, out) = match cmd {
        Command::Norm(a) => (render_norm(&run_norm(a)?, a.out.format)?, &a.out),
        Command::Pnd(a) => (render_pnd(&run_pnd(a)?, a.out.format)?, &a.out),
        Command::Genfun(a) => (render_genfun(&run_genfun(a)?, a.out.format)?, &a.out),
        Command::Sweep(a) => {
            let report = run_sweep(a)?;
            for s in &report.skipped {
                writeln!(stderr, "warning: skipped {}", describe(&s.params, &s.reason))?;
            }
            (render_sweep(&report, a.out.format)?, &a.out)
        }
        Command::Verify(a) => {
            let report = run_verify_cmd(a)?;
            emit(&render_verify(&report, a.out.format)?, &a.out, stdout)?;
            for c in report.checks.iter().filter(|c| !c.passed) {
                writeln!(stderr, "FAILED {}: max deviation {:e} >= {:e}", c.check, c.max_deviation, c.threshold)?;
            }
            return Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED });
        }
    };
    emit(&text, out, stdout)?;
    Ok(EXIT_OK)
}

fn emit(text: &str, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &out.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn describe(p: &ParamsRecord, reason: &str) -> String {
    format!("n_c={} r={} m={} variant={} ({reason})", fmt_f64(p.n_c), fmt_f64(p.r), p.m, p.variant)
}

pub fn run_norm(a: &NormArgs) -> Result<NormReport, CliError> {
    let params = a.state.params()?;
    if params.is_zero_norm() {
        return Err(Error::ZeroNorm(format!(
            "cannot subtract {} photon(s) from the vacuum (n_c = 0, r = 0)",
            params.m
        ))
        .into());
    }
    let closed = normalization(&params)?;
    let mut report = NormReport {
        params: (&params).into(),
        norm_closed_form: closed,
        norm_oracle: None,
        rel_diff: None,
        oracle: None,
    };
    if a.with_oracle {
        let oracle = FockOracle::new();
        let (value, meta) = match a.dim {
            AutoOr::Auto => {
                let c = oracle.certified(&params, 0)?;
                (c.norm, OracleMeta { dim: c.dim, auto: true, norm_change: Some(c.norm_change), pnd_change: None })
            }
            AutoOr::Value(dim) => {
                (oracle.norm(&params, dim)?, OracleMeta { dim, auto: false, norm_change: None, pnd_change: None })
            }
        };
        report.norm_oracle = Some(value);
        report.rel_diff = Some(((closed - value) / value).abs());
        report.oracle = Some(meta);
    }
    Ok(report)
}

pub fn run_pnd(a: &PndArgs) -> Result<PndReport, CliError> {
    let params = a.state.params()?;
    let n_max = match a.n_max {
        AutoOr::Auto => NMax::Auto,
        AutoOr::Value(n) => NMax::Fixed(n),
    };
    let dist = pnd_table(&params, n_max)?;
    let mut rows: Vec<PndRow> = dist
        .probabilities()
        .into_iter()
        .enumerate()
        .map(|(n, p)| PndRow { n, pnd_closed_form: p, pnd_oracle: None, abs_diff: None })
        .collect();
    let mut meta = None;
    if a.with_oracle {
        let oracle = FockOracle::new();
        let top = dist.n_max();
        let (measured, m) = match a.dim {
            AutoOr::Auto => {
                let c = oracle.certified(&params, top)?;
                let m = OracleMeta {
                    dim: c.dim,
                    auto: true,
                    norm_change: Some(c.norm_change),
                    pnd_change: Some(c.pnd_change),
                };
                (c.distribution, m)
            }
            AutoOr::Value(dim) => (
                oracle.pnd(&params, dim, top)?,
                OracleMeta { dim, auto: false, norm_change: None, pnd_change: None },
            ),
        };
        for (row, o) in rows.iter_mut().zip(measured.probabilities()) {
            row.pnd_oracle = Some(o);
            row.abs_diff = Some((row.pnd_closed_form - o).abs());
        }
        meta = Some(m);
    }
    Ok(PndReport {
        params: (&params).into(),
        tail_bound: dist.tail_bound(),
        truncation: dist.truncation(),
        oracle: meta,
        rows,
    })
}

pub fn run_genfun(a: &GenfunArgs) -> Result<GenfunReport, CliError> {
    let params = StateArgs { n_c: a.n_c, r: a.r, m: 0, variant: VariantArg::Add }.params()?;
    let closed = expectation_exp_number(a.f, &params)?;
    let mut report = GenfunReport {
        n_c: a.n_c,
        r: a.r,
        f: a.f,
        exp_closed_form: closed,
        exp_oracle: None,
        abs_diff: None,
        oracle_dim: None,
    };
    if a.with_oracle {
        let dim = match a.dim {
            AutoOr::Auto => 2 * recommended_dim(a.n_c, a.r, 0),
            AutoOr::Value(d) => d,
        };
        let o = oracle_exp_number(a.f, &params, dim)?;
        report.exp_oracle = Some(o);
        report.abs_diff = Some((closed - o).abs());
        report.oracle_dim = Some(dim);
    }
    Ok(report)
}

pub fn run_verify_cmd(a: &VerifyArgs) -> Result<VerifyReport, CliError> {
    let mut config = VerifyConfig { tol: a.tol, seed: a.seed, ..VerifyConfig::default() };
    if !a.checks.is_empty() {
        config.checks = a
            .checks
            .iter()
            .flat_map(|s| s.split(','))
            .map(|s| s.trim().parse::<CheckKind>())
            .collect::<Result<_, _>>()?;
    }
    if !a.n_c.is_empty() {
        config.purification_nc = Some(a.n_c.clone());
    }
    Ok(run_verify(&config)?)
}

pub fn run_sweep(a: &SweepArgs) -> Result<SweepReport, CliError> {
    let ncs = parse_float_grid(&a.n_c)?;
    let rs = parse_float_grid(&a.r)?;
    let ms = parse_int_grid(&a.m)?;
    let variants: Vec<Variant> = match a.variant.to_ascii_lowercase().as_str() {
        "both" => vec![Variant::Added, Variant::Subtracted],
        other => vec![other.parse()?],
    };
    let total = ncs.len().saturating_mul(rs.len()).saturating_mul(ms.len()).saturating_mul(variants.len());
    if total > MAX_SWEEP_POINTS {
        return Err(CliError::Usage(format!("sweep has {total} points, limit is {MAX_SWEEP_POINTS}")));
    }
    let mut grid = Vec::with_capacity(total);
    for &n_c in &ncs {
        for &r in &rs {
            for &m in &ms {
                for &variant in &variants {
                    let params = StateParams { n_c, r, m, variant };
                    params.check()?;
                    grid.push(params);
                }
            }
        }
    }
    let n_max = match a.n_max {
        AutoOr::Auto => NMax::Auto,
        AutoOr::Value(n) => NMax::Fixed(n),
    };
    // collect() keeps grid order
    let results: Vec<Result<SweepBlock, (StateParams, Error)>> = grid
        .par_iter()
        .map(|p| {
            pnd_table(p, n_max)
                .map(|d| SweepBlock {
                    params: p.into(),
                    tail_bound: d.tail_bound(),
                    truncation: d.truncation(),
                    probabilities: d.probabilities(),
                })
                .map_err(|e| (*p, e))
        })
        .collect();
    let mut report = SweepReport { blocks: Vec::new(), skipped: Vec::new() };
    for res in results {
        match res {
            Ok(b) => report.blocks.push(b),
            Err((p, Error::ZeroNorm(_))) => {
                report.skipped.push(SkippedPoint { params: (&p).into(), reason: "zero-norm state".into() })
            }
            Err((_, e)) => return Err(e.into()),
        }
    }
    Ok(report)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn opt(x: Option<f64>) -> Option<String> {
    x.map(fmt_f64)
}

pub fn render_norm(r: &NormReport, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut header = String::from("n_c,r,m,variant,norm_closed_form");
    let mut row = format!(
        "{},{},{},{},{}",
        fmt_f64(r.params.n_c),
        fmt_f64(r.params.r),
        r.params.m,
        r.params.variant,
        fmt_f64(r.norm_closed_form)
    );
    if let (Some(o), Some(d), Some(meta)) = (opt(r.norm_oracle), opt(r.rel_diff), &r.oracle) {
        header.push_str(",norm_oracle,rel_diff,oracle_dim");
        row.push_str(&format!(",{o},{d},{}", meta.dim));
    }
    Ok(format!("{header}\n{row}\n"))
}

/// CSV columns are exactly `n,pnd_closed_form` or
/// `n,pnd_closed_form,pnd_oracle,abs_diff`.
pub fn render_pnd(r: &PndReport, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return to_json(r);
    }
    let with_oracle = r.oracle.is_some();
    let mut s = String::from(if with_oracle { "n,pnd_closed_form,pnd_oracle,abs_diff\n" } else { "n,pnd_closed_form\n" });
    for row in &r.rows {
        s.push_str(&format!("{},{}", row.n, fmt_f64(row.pnd_closed_form)));
        if let (Some(o), Some(d)) = (row.pnd_oracle, row.abs_diff) {
            s.push_str(&format!(",{},{}", fmt_f64(o), fmt_f64(d)));
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn render_genfun(r: &GenfunReport, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut header = String::from("n_c,r,f,exp_closed_form");
    let mut row = format!("{},{},{},{}", fmt_f64(r.n_c), fmt_f64(r.r), fmt_f64(r.f), fmt_f64(r.exp_closed_form));
    if let (Some(o), Some(d), Some(dim)) = (r.exp_oracle, r.abs_diff, r.oracle_dim) {
        header.push_str(",exp_oracle,abs_diff,oracle_dim");
        row.push_str(&format!(",{},{},{dim}", fmt_f64(o), fmt_f64(d)));
    }
    Ok(format!("{header}\n{row}\n"))
}

pub fn render_verify(r: &VerifyReport, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut s = String::from("check,max_deviation,threshold,passed,detail\n");
    for c in &r.checks {
        s.push_str(&format!(
            "{},{},{},{},\"{}\"\n",
            c.check,
            fmt_f64(c.max_deviation),
            fmt_f64(c.threshold),
            c.passed,
            c.detail.replace('"', "\"\"")
        ));
    }
    Ok(s)
}

/// Long format `n_c,r,m,variant,n,probability`; skipped points appear as
/// `#` comment rows in grid order.
pub fn render_sweep(r: &SweepReport, format: Format) -> Result<String, CliError> {
    if format == Format::Json {
        return to_json(r);
    }
    let mut s = String::from("n_c,r,m,variant,n,probability\n");
    let mut skipped = r.skipped.iter().peekable();
    for b in &r.blocks {
        let key = format!("{},{},{},{}", fmt_f64(b.params.n_c), fmt_f64(b.params.r), b.params.m, b.params.variant);
        while let Some(sk) = skipped.next_if(|sk| before(&sk.params, &b.params)) {
            s.push_str(&format!("# warning: skipped {}\n", describe(&sk.params, &sk.reason)));
        }
        for (n, p) in b.probabilities.iter().enumerate() {
            s.push_str(&format!("{key},{n},{}\n", fmt_f64(*p)));
        }
    }
    for sk in skipped {
        s.push_str(&format!("# warning: skipped {}\n", describe(&sk.params, &sk.reason)));
    }
    Ok(s)
}

/// Grid order is n_c, r, m, variant (outermost first).
fn before(a: &ParamsRecord, b: &ParamsRecord) -> bool {
    let key = |p: &ParamsRecord| (p.n_c, p.r, p.m, p.variant == Variant::Subtracted);
    key(a) < key(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("sqlegendre").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn grids() {
        assert_eq!(parse_float_grid("0,0.25,0.5").unwrap(), vec![0.0, 0.25, 0.5]);
        assert_eq!(parse_float_grid("0:0.5:0.25").unwrap(), vec![0.0, 0.25, 0.5]);
        assert_eq!(parse_float_grid("-1:1:1").unwrap(), vec![-1.0, 0.0, 1.0]);
        assert!(parse_float_grid("0:1:0").is_err());
        assert!(parse_float_grid("1:0:0.1").is_err());
        assert!(parse_float_grid("a,b").is_err());
        assert!(parse_float_grid("0:1e9:1e-3").is_err());
        assert_eq!(parse_int_grid("0:3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_int_grid("1,4").unwrap(), vec![1, 4]);
        assert!(parse_int_grid("3:1").is_err());
    }

    #[test]
    fn auto_or() {
        assert_eq!("auto".parse::<AutoOr>().unwrap(), AutoOr::Auto);
        assert_eq!("12".parse::<AutoOr>().unwrap(), AutoOr::Value(12));
        assert!("-1".parse::<AutoOr>().is_err());
    }

    #[test]
    fn norm_command() {
        let (code, out, _) = run_capture(&["norm", "--nc", "2", "--r", "0", "--m", "3", "--variant", "add"]);
        assert_eq!(code, EXIT_OK);
        let row = out.lines().nth(1).unwrap();
        let value: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
        assert!((value - 162.0).abs() < 1e-12);
    }

    #[test]
    fn zero_norm_exit_code() {
        let (code, out, err) = run_capture(&["norm", "--nc", "0", "--r", "0", "--m", "1", "--variant", "sub"]);
        assert_eq!(code, EXIT_ZERO_NORM);
        assert!(out.is_empty());
        assert!(err.contains("zero-norm"));
        let (code, _, _) = run_capture(&["pnd", "--nc", "0", "--r", "0", "--m", "2", "--variant", "sub"]);
        assert_eq!(code, EXIT_ZERO_NORM);
    }

    #[test]
    fn parameter_errors_exit_2() {
        assert_eq!(run_capture(&["norm", "--nc", "-0.1", "--r", "0"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["norm", "--nc", "1"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["pnd", "--nc", "1", "--r", "0", "--variant", "both"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["verify", "--check", "nonsense"]).0, EXIT_USAGE);
    }

    #[test]
    fn negative_r_is_accepted() {
        let (code, out, _) = run_capture(&["norm", "--nc", "1", "--r", "-0.5", "--m", "1"]);
        assert_eq!(code, EXIT_OK, "{out}");
    }

    #[test]
    fn pnd_vacuum_rows() {
        let (code, out, _) = run_capture(&["pnd", "--nc", "0", "--r", "0", "--m", "0", "--nmax", "2"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "n,pnd_closed_form\n0,1.0\n1,0.0\n2,0.0\n");
    }

    #[test]
    fn genfun_command() {
        let (code, out, _) = run_capture(&["genfun", "--nc", "1", "--r", "0.5", "--f", "-0.6931471805599453", "--with-oracle"]);
        assert_eq!(code, EXIT_OK);
        let fields: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        let closed: f64 = fields[3].parse().unwrap();
        let diff: f64 = fields[5].parse().unwrap();
        assert!((closed - 0.5912125893133826).abs() < 1e-12);
        assert!(diff < 1e-9);
    }

    #[test]
    fn sweep_blocks_and_skips() {
        let (code, out, err) = run_capture(&["sweep", "--nc", "0", "--r", "0,0.25", "--m", "0:1", "--variant", "sub"]);
        assert_eq!(code, EXIT_OK);
        assert!(err.contains("zero-norm"));
        let comment_rows: Vec<&str> = out.lines().filter(|l| l.starts_with('#')).collect();
        assert_eq!(comment_rows.len(), 1);
        // (r=0, m=1) is skipped; grid order puts it before the r=0.25 blocks
        let lines: Vec<&str> = out.lines().collect();
        let pos = lines.iter().position(|l| l.starts_with('#')).unwrap();
        assert!(lines[pos - 1].starts_with("0.0,0.0,0,sub"));
        assert!(lines[pos + 1].starts_with("0.0,0.25,0,sub"));
    }

    #[test]
    fn sweep_guard() {
        let (code, _, err) = run_capture(&["sweep", "--nc", "0:100:0.01", "--r", "0:1:0.01"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("limit"));
    }
}
