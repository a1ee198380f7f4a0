//! Command-line front end. Exit codes: 0 no failing check, 2 a failing check or violation
//! certificate, 3 input or usage error.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::backend::Operator;
use crate::classify::{is_gamma_isometry, is_gamma_isometry_sym, is_gamma_unitary, von_neumann_sampled, wold_decompose, IsometryConfig, VerdictKind, VnConfig};
use crate::dilation::{check_coisometric_extension, compatibility_check, interior_checks, minimal_space, necessary_conditions, necessary_conditions_dense, schaffer_dilation, verify_dilation};
use crate::error::{Error, Result};
use crate::fundamental::{omega_bound_check, solve_fundamental, verify_altform, FundamentalSet, OMEGA_ANGULAR_SAMPLES};
use crate::lab::{example_generator, run_scenario};
use crate::report::{CheckEntry, CheckReport};
use crate::serde_util::matrix_to_json;
use crate::tuple::{AnyTuple, OperatorTuple};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gamma-lab", version, about = "Checks for operator tuples on the symmetrized polydisc")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Unitary, isometry and sampled von Neumann batteries.
    Classify(InputArgs),
    /// Solve the fundamental equations and check the alternative form and the ω bound.
    Fundamental(InputArgs),
    /// Kernel conditions for an isometric dilation.
    Necessary(InputArgs),
    /// Build the truncated unitary dilation and verify its moments.
    Dilate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        /// Highest total degree of verified moments; defaults to `--levels`.
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Run one of the two built-in exact scenarios.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        which: u8,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Tuple file, or `-` for stdin.
    input: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Boundary sample grid per coordinate.
    #[arg(long)]
    grid: Option<usize>,
    /// Random polynomials in the von Neumann battery.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

/// Numerical settings shared by every command.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub grid: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self { tol: 1e-10, grid: None, trials: None, seed: 0 }
    }
}

impl CommonArgs {
    fn settings(&self) -> Settings {
        Settings { tol: self.tol, grid: self.grid, trials: self.trials, seed: self.seed }
    }
}

impl Settings {
    fn vn(&self, n: usize) -> VnConfig {
        let base = VnConfig::for_n(n);
        VnConfig {
            grid: self.grid.unwrap_or(base.grid),
            trials: self.trials.unwrap_or(base.trials),
            tol: self.tol,
            seed: self.seed,
            ..base
        }
    }
}

/// Machine-readable report. Contains no timestamps, so equal inputs give equal bytes.
#[derive(Serialize, Debug)]
pub struct ReportFile {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictKind>,
    pub checks: Vec<CheckEntry>,
    pub seed: u64,
    pub versions: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
}

/// Result of one command before formatting.
#[derive(Debug)]
pub struct Outcome {
    pub verdict: Option<VerdictKind>,
    pub report: CheckReport,
    pub data: Option<Value>,
    pub code: i32,
}

impl Outcome {
    pub fn into_report_file(self, command: &str, seed: u64) -> ReportFile {
        ReportFile {
            command: command.into(),
            verdict: self.verdict,
            checks: self.report.checks,
            seed,
            versions: json!({ "gamma-lab": env!("CARGO_PKG_VERSION") }),
            data: self.data,
        }
    }

    fn from_report(report: CheckReport, data: Option<Value>) -> Self {
        let code = if report.any_fail() { EXIT_VIOLATION } else { EXIT_OK };
        Self { verdict: None, report, data, code }
    }
}

/// Caps the global rayon pool at `GAMMA_LAB_THREADS` when that variable is a positive integer.
pub fn configure_threads() {
    if let Some(n) = std::env::var("GAMMA_LAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a pool built earlier in the process wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    match dispatch(&cli.command, stdin) {
        Ok((name, common, outcome)) => match emit(&name, &common, outcome, stdout) {
            Ok(code) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_INPUT
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read_input(path: &PathBuf, stdin: &mut dyn Read) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        stdin.read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    Ok(text)
}

fn load(input: &InputArgs, stdin: &mut dyn Read) -> Result<AnyTuple> {
    AnyTuple::parse(&read_input(&input.input, stdin)?, input.common.tol)
}

fn dispatch(cmd: &Command, stdin: &mut dyn Read) -> Result<(String, CommonArgs, Outcome)> {
    Ok(match cmd {
        Command::Classify(i) => ("classify".into(), i.common.clone(), classify(&load(i, stdin)?, &i.common.settings())?),
        Command::Fundamental(i) => ("fundamental".into(), i.common.clone(), fundamental(&load(i, stdin)?, &i.common.settings())?),
        Command::Necessary(i) => ("necessary".into(), i.common.clone(), necessary(&load(i, stdin)?, &i.common.settings())?),
        Command::Dilate { input, levels, degree } => {
            let t = match load(input, stdin)? {
                AnyTuple::Dense(t) => t,
                AnyTuple::Shift(_) => return Err(Error::Parameter("dilate needs a dense tuple".into())),
            };
            ("dilate".into(), input.common.clone(), dilate(&t, *levels, degree.unwrap_or(*levels as u32), &input.common.settings())?)
        }
        Command::Example { which, common } => ("example".into(), common.clone(), example(*which)?),
    })
}

fn emit(command: &str, common: &CommonArgs, o: Outcome, stdout: &mut dyn Write) -> Result<i32> {
    let text = match common.format {
        Format::Json => {
            let code = o.code;
            let file = o.into_report_file(command, common.seed);
            return write_out(common, serde_json::to_string_pretty(&file)? + "\n", stdout).map(|_| code);
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(v) = o.verdict {
                s.push_str(&format!("verdict: {v:?}\n"));
            }
            s.push_str(&o.report.to_text());
            s
        }
    };
    write_out(common, text, stdout)?;
    Ok(o.code)
}

fn write_out(common: &CommonArgs, text: String, stdout: &mut dyn Write) -> Result<()> {
    match &common.out {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn classify(t: &AnyTuple, c: &Settings) -> Result<Outcome> {
    match t {
        AnyTuple::Dense(t) => {
            let unitary = is_gamma_unitary(t, c.tol);
            let cfg = IsometryConfig { vn: c.vn(t.n().saturating_sub(1).max(2)), ..IsometryConfig::for_n(t.n()) };
            let isometry = is_gamma_isometry(t, c.tol, &cfg)?;
            let vn = von_neumann_sampled(t, &c.vn(t.n()))?;
            let violated = vn.is_violation();
            let kind = if violated {
                VerdictKind::ViolationCertificate
            } else if unitary.kind == VerdictKind::GammaUnitary {
                VerdictKind::GammaUnitary
            } else if isometry.kind == VerdictKind::GammaIsometry {
                match wold_decompose(t, c.tol) {
                    Ok(w) if w.unitary_dim == 0 => VerdictKind::PureGammaIsometry,
                    _ => VerdictKind::GammaIsometry,
                }
            } else {
                VerdictKind::NecessaryBatteryPassed
            };
            let mut report = unitary.evidence.prefixed("unitary");
            report.extend(isometry.evidence.prefixed("isometry"));
            report.extend(vn.evidence);
            let caveats: Vec<String> = isometry.caveats.iter().chain(&vn.caveats).cloned().collect();
            let data = json!({ "caveats": caveats, "witness": vn.witness });
            Ok(Outcome { verdict: Some(kind), report, data: Some(data), code: if violated { EXIT_VIOLATION } else { EXIT_OK } })
        }
        AnyTuple::Shift(t) => {
            let v = is_gamma_isometry_sym(t);
            Ok(Outcome { verdict: Some(v.kind), report: v.evidence, data: Some(json!({ "caveats": v.caveats })), code: EXIT_OK })
        }
    }
}

fn fundamental_entries<O: Operator>(t: &OperatorTuple<O>, tol: f64) -> Result<(CheckReport, Option<FundamentalSet<O>>)> {
    let mut r = CheckReport::new();
    match solve_fundamental(t, tol) {
        Ok(fs) => {
            let worst = fs.residuals.iter().copied().fold(0.0, f64::max);
            r.push(CheckEntry::pass("fundamental_equation", worst, tol));
            r.push(verify_altform(t, &fs, tol));
            Ok((r, Some(fs)))
        }
        Err(Error::NoFundamentalOperators { index, residual, tol }) => {
            r.push(CheckEntry::fail("fundamental_equation", residual, tol, json!({ "index": index, "residual": residual })));
            Ok((r, None))
        }
        Err(e) => Err(e),
    }
}

pub fn fundamental(t: &AnyTuple, c: &Settings) -> Result<Outcome> {
    match t {
        AnyTuple::Dense(t) => {
            let (mut r, fs) = fundamental_entries(t, c.tol)?;
            let data = match fs {
                Some(fs) => {
                    r.push(omega_bound_check(&fs, t.n(), OMEGA_ANGULAR_SAMPLES, c.tol)?);
                    Some(json!({ "defect_rank": fs.defect.rank(), "e": fs.e.iter().map(matrix_to_json).collect::<Vec<_>>() }))
                }
                None => None,
            };
            Ok(Outcome::from_report(r, data))
        }
        AnyTuple::Shift(t) => {
            let (r, fs) = fundamental_entries(t, c.tol)?;
            let data = fs.map(|fs| json!({ "defect_range": fs.defect.range.idx, "e": fs.e.iter().map(|e| e.to_string()).collect::<Vec<_>>() }));
            Ok(Outcome::from_report(r, data))
        }
    }
}

pub fn necessary(t: &AnyTuple, c: &Settings) -> Result<Outcome> {
    match t {
        AnyTuple::Dense(t) => {
            let (mut r, fs) = fundamental_entries(t, c.tol)?;
            if let Some(fs) = fs {
                r.extend(necessary_conditions_dense(t, &fs, c.tol, &c.vn((t.n() - 1).max(2)))?);
            }
            Ok(Outcome::from_report(r, None))
        }
        AnyTuple::Shift(t) => {
            let (mut r, fs) = fundamental_entries(t, c.tol)?;
            if let Some(fs) = fs {
                r.extend(necessary_conditions(t, &fs, c.tol));
            }
            Ok(Outcome::from_report(r, None))
        }
    }
}

pub fn dilate(t: &OperatorTuple<crate::operator::DenseOperator>, levels: usize, degree: u32, c: &Settings) -> Result<Outcome> {
    let e = solve_fundamental(t, c.tol)?;
    let f = solve_fundamental(&t.adjoint(), c.tol)?;
    let mut r = compatibility_check(&e, &f, c.tol.max(1e-8));
    let dil = schaffer_dilation(t, &e, &f, levels, c.tol.max(1e-8))?;
    let mtol = c.tol.max(1e-8);
    r.extend(verify_dilation(t, &dil.ops(), &dil.embed, degree, mtol)?);
    r.extend(interior_checks(&dil, mtol));
    let min = minimal_space(&dil.ops(), &dil.embed, c.tol)?;
    r.extend(check_coisometric_extension(t, &min.ops, &min.embed, mtol).prefixed("minimal"));
    let data = json!({
        "levels": dil.levels,
        "space_dims": dil.space_dims,
        "offsets": dil.offsets,
        "minimal_dim": min.dim(),
        "ops": dil.ops().iter().map(matrix_to_json).collect::<Vec<_>>(),
        "embed": matrix_to_json(&dil.embed),
    });
    Ok(Outcome::from_report(r, Some(data)))
}

pub fn example(which: u8) -> Result<Outcome> {
    let sc = example_generator(which).ok_or_else(|| Error::Parameter(format!("no example {which}")))?;
    let report = run_scenario(&sc)?;
    let code = if report.meets_expectations() { EXIT_OK } else { EXIT_VIOLATION };
    let data = json!({ "tuple": serde_json::from_str::<Value>(&sc.tuple_json()?)? });
    Ok(Outcome { verdict: None, report, data: Some(data), code })
}
