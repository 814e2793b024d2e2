//! Command-line entry point.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{self, format_rational};
use crate::characters::{CharacterTable, ProgressionSpec};
use crate::error::{Error, Result};
use crate::forms::{self, load_form, load_series_file, Character, FormDescriptor, HalfIntegralForm};
use crate::genfun::{real_root_count, remark_polynomial};
use crate::hecke;
use crate::qseries::{eta_power, expand_recipe, EtaRecipe};
use crate::shimura::{crosscheck_lift, lift_coefficients, LiftCheckReport};
use crate::signscan::{scan, ScanMode, SignChangeReport};
use crate::suite::{self, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "hisign", version, about = "Exact checks and sign-change scans for half-integral weight eigenforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expand an eta quotient times a theta power into a form file.
    Expand(ExpandArgs),
    /// Eigen-consistency, multiplicativity and generating-function identities on a form.
    Verify(VerifyArgs),
    /// Shimura lift table and cross-check against an integral-weight form.
    Lift(LiftArgs),
    /// Seeded random instances of the generating-function identities.
    GenfunCheck(GenfunArgs),
    /// Per-prime sign-change reports as CSV.
    Scan(ScanArgs),
    /// Character table modulo a prime.
    Characters(CharactersArgs),
}

#[derive(Debug, Args)]
struct ExpandArgs {
    /// Eta factors as `d:r,d:r,...`, e.g. `2:12`.
    #[arg(long, default_value = "2:12")]
    factors: String,
    #[arg(long, default_value_t = 1)]
    theta_power: u32,
    #[arg(long, default_value_t = 4)]
    level: u64,
    /// Weight is `k + 1/2`, or `k` with `--integral-weight`.
    #[arg(long, default_value_t = 6)]
    k: u32,
    #[arg(long, default_value_t = 10_000)]
    prec: u64,
    /// Write a plain series file for an integral-weight form instead.
    #[arg(long)]
    integral_weight: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    form: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    primes: Vec<u64>,
    #[arg(long, default_value_t = 30)]
    t_max: u64,
    #[arg(long, default_value_t = 4)]
    m_max: u32,
    #[arg(long, default_value_t = 15)]
    mult_max: u64,
    /// Also report real roots of the order-`m_p` remark polynomial per prime.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m_p: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct LiftArgs {
    #[arg(long)]
    form: PathBuf,
    #[arg(long, default_value_t = 1)]
    t: u64,
    #[arg(long, default_value_t = 20)]
    n_max: u64,
    #[arg(long, default_value_t = 50)]
    p_max: u64,
    /// Integral-weight series file; defaults to `eta(z)^24`.
    #[arg(long)]
    integral: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GenfunArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 100)]
    terms: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Odd,
    Even,
    Progression,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long)]
    form: PathBuf,
    #[arg(long, default_value_t = 1)]
    t: u64,
    #[arg(long, value_enum, default_value = "full")]
    mode: ModeArg,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    h: Option<u64>,
    #[arg(long, default_value_t = 50)]
    p_max: u64,
    #[arg(long, default_value_t = 200)]
    nu_max: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CharactersArgs {
    #[arg(long)]
    q: u64,
    /// With `--h`, also describe the progression for this prime.
    #[arg(long, requires = "h")]
    p: Option<u64>,
    #[arg(long, requires = "p")]
    h: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Outcome {
    Passed,
    Failed,
}

/// Runs the CLI: 0 on success, 1 when a verification fails, 2 on usage or
/// input errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Passed) => 0,
        Ok(Outcome::Failed) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Expand(a) => expand(a),
        Command::Verify(a) => verify(a),
        Command::Lift(a) => lift(a),
        Command::GenfunCheck(a) => genfun_check(a),
        Command::Scan(a) => scan_cmd(a),
        Command::Characters(a) => characters(a),
    }
}

fn emit(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => forms::write_file(path, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .map_err(|e| Error::Io { path: PathBuf::from("<stdout>"), message: e.to_string() })
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    text.push('\n');
    emit(out, &text)
}

fn outcome(passed: bool) -> Outcome {
    if passed {
        Outcome::Passed
    } else {
        Outcome::Failed
    }
}

fn expand(a: ExpandArgs) -> Result<Outcome> {
    let recipe = EtaRecipe::new(EtaRecipe::parse_factors(&a.factors)?, a.theta_power)?;
    let series = expand_recipe(&recipe, a.prec)?;
    let text = if a.integral_weight {
        if recipe.doubled_weight() != 2 * a.k as i64 {
            return Err(Error::InvalidWeight(a.k));
        }
        forms::series_file_json(a.level, a.k, &series)
    } else {
        if recipe.doubled_weight() != 2 * a.k as i64 + 1 {
            return Err(Error::InvalidWeight(a.k));
        }
        let descriptor = FormDescriptor::new(a.level, a.k, Character::Trivial)?;
        forms::form_to_json(&HalfIntegralForm::new(descriptor, series)?)
    };
    emit(a.out.as_deref(), &text)?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct RemarkRow {
    p: u64,
    m_p: u32,
    polynomial: String,
    real_roots: Option<usize>,
}

#[derive(Serialize)]
struct VerifyOutput {
    #[serde(flatten)]
    report: suite::VerifyReport,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    remark: Vec<RemarkRow>,
}

fn verify(a: VerifyArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let opts = VerifyOptions { primes: a.primes.clone(), t_max: a.t_max, m_max: a.m_max, mult_max: a.mult_max };
    let report = suite::verify_form(&form, &opts)?;
    let mut remark = Vec::new();
    if let Some(m_p) = a.m_p {
        for &p in &a.primes {
            let trace = hecke::extract_trace(&form, report.base_t, p)?;
            let q = remark_polynomial(&hecke::satake_data(&trace, p, form.k()), m_p as usize);
            let real_roots = if q.is_zero() { None } else { Some(real_root_count(&q)?) };
            remark.push(RemarkRow { p, m_p, polynomial: q.to_string(), real_roots });
        }
    }
    let passed = report.passed;
    emit_json(a.out.as_deref(), &VerifyOutput { report, remark })?;
    Ok(outcome(passed))
}

#[derive(Serialize)]
struct LiftOutput {
    t: u64,
    values: Vec<String>,
    crosscheck: LiftCheckReport,
}

fn lift(a: LiftArgs) -> Result<Outcome> {
    let form = load_form(&a.form)?;
    let integral = match &a.integral {
        Some(path) => load_series_file(path)?,
        None => eta_power(1, 24, a.p_max.max(a.n_max))?,
    };
    let table = lift_coefficients(&form, a.t, a.n_max)?;
    let crosscheck = crosscheck_lift(&form, a.t, &integral, a.p_max)?;
    let passed = crosscheck.passed();
    let output = LiftOutput { t: a.t, values: table.values().iter().map(format_rational).collect(), crosscheck };
    emit_json(a.out.as_deref(), &output)?;
    Ok(outcome(passed))
}

fn genfun_check(a: GenfunArgs) -> Result<Outcome> {
    let report = suite::genfun_check(a.seed, a.instances, a.terms);
    emit_json(a.out.as_deref(), &report)?;
    Ok(outcome(report.passed))
}

fn scan_mode(a: &ScanArgs) -> Result<ScanMode> {
    Ok(match a.mode {
        ModeArg::Full => ScanMode::Full,
        ModeArg::Odd => ScanMode::Odd,
        ModeArg::Even => ScanMode::Even,
        ModeArg::Progression => match (a.q, a.h) {
            (Some(q), Some(h)) => {
                arith::require_prime(q)?;
                if h == 0 || h >= q {
                    return Err(Error::OutOfRange { h, q });
                }
                ScanMode::Progression { q, h }
            }
            _ => return Err(Error::InvalidArgument("progression mode needs --q and --h".into())),
        },
    })
}

pub fn scan_csv(reports: &[SignChangeReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record(["p", "t", "mode", "length", "change_count", "first_change_index", "zero_count", "deligne_status"])
        .map_err(io)?;
    for r in reports {
        w.write_record([
            r.p.to_string(),
            r.t.to_string(),
            r.mode.clone(),
            r.length.to_string(),
            r.change_count.to_string(),
            r.first_change_index.map(|i| i.to_string()).unwrap_or_default(),
            r.zero_count.to_string(),
            r.deligne_status.as_str().to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn scan_cmd(a: ScanArgs) -> Result<Outcome> {
    let mode = scan_mode(&a)?;
    let form = load_form(&a.form)?;
    let reports = scan(&form, a.t, mode, a.p_max, a.nu_max)?;
    emit(a.out.as_deref(), &scan_csv(&reports)?)?;
    Ok(Outcome::Passed)
}

#[derive(Serialize)]
struct ProgressionOutput {
    p: u64,
    h: u64,
    n: u64,
    d: u64,
}

#[derive(Serialize)]
struct CharactersOutput {
    q: u64,
    generator: u64,
    /// `log[a - 1]` is the discrete log of `a` to the generator.
    log: Vec<u64>,
    /// `exponents[j][a - 1] = j log(a) mod (q - 1)`; the character value is
    /// `exp(2 pi i exponent / (q - 1))`.
    exponents: Vec<Vec<u64>>,
    orthogonal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    progression: Option<ProgressionOutput>,
}

fn characters(a: CharactersArgs) -> Result<Outcome> {
    let table = CharacterTable::new(a.q)?;
    let units: Vec<u64> = (1..a.q).collect();
    let log = units.iter().map(|&u| table.log(u).expect("unit")).collect();
    let exponents = (0..table.len())
        .map(|j| units.iter().map(|&u| table.exponent(j, u).expect("unit")).collect())
        .collect();
    let progression = match (a.p, a.h) {
        (Some(p), Some(h)) => {
            let spec = ProgressionSpec::new(a.q, h, p)?;
            Some(ProgressionOutput { p, h, n: spec.n, d: spec.d })
        }
        _ => None,
    };
    let orthogonal = table.orthogonality_holds();
    let output = CharactersOutput { q: a.q, generator: table.generator(), log, exponents, orthogonal, progression };
    emit_json(a.out.as_deref(), &output)?;
    Ok(outcome(orthogonal))
}
