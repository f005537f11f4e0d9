//! Space files, command dispatch and reports.
//!
//! Every command prints one JSON report. Exit codes depend only on the
//! report: 0 when every check passes, 1 when one is violated or refuted,
//! 2 when the input cannot be used.

pub mod spacefile;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::comparison::ComparisonFunction;
use crate::contraction::{
    certify_finite, certify_gm, certify_pairs, check_reduction, grid_pairs, Contraction, FiniteMap, LineMap,
};
use crate::gmetric::{
    check_chain, check_consequences, check_dmetric, check_gmetric, check_lipschitz, check_strong_triangle,
    g_converges_prefix, is_symmetric, random_gmetric, GMetric, LIPSCHITZ_CAP,
};
use crate::metric::{check_almost_metric, check_metric, converges_prefix, BinaryTable, Interval, ViolationReport};
use crate::picard::{beta_bound_check, brute_fixpoints, iterate, rate_check, PicardTrace, StopReason};
use spacefile::{parse_space_file, FiniteGspaceFile, SpaceFile, SpaceFileError};

#[derive(Debug, Parser)]
#[command(name = "fixmetric", version, about = "Check G-metric spaces, certify contractions and run Picard iteration")]
pub struct Cli {
    /// Slack allowed in every inequality.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for generated data.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Step size at which an oracle iteration counts as converged.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub fp_tol: f64,
    /// Also write the report to this path.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check axioms of a finite table.
    Check {
        #[arg(long, value_enum)]
        axioms: Option<AxiomSet>,
        file: PathBuf,
    },
    /// Print the derived metrics of a G-space and whether it is symmetric.
    Derive { file: PathBuf },
    /// Certify the file's map against a contraction class.
    Certify {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        gamma: Option<f64>,
        /// Comparison function, e.g. `linear:0.5` or `pwl:0,0;1,0.5`.
        #[arg(long)]
        phi: Option<ComparisonFunction>,
        file: PathBuf,
    },
    /// Run the G-to-metric reduction pipeline end to end.
    Reduce {
        #[arg(long, default_value_t = 0.49)]
        gamma: f64,
        file: PathBuf,
    },
    /// Iterate the file's map; all starting points when `--x0` is absent on a finite carrier.
    Solve {
        #[arg(long)]
        x0: Option<String>,
        file: PathBuf,
    },
    /// Iterate and check the diameter, envelope and rate bounds.
    Diagnose {
        #[arg(long)]
        phi: ComparisonFunction,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        x0: Option<String>,
        #[arg(long, default_value_t = 1e6)]
        search_cap: f64,
        file: PathBuf,
    },
    /// List fixed points by exhaustive scan (finite) or closed form (builtin maps).
    Oracle { file: PathBuf },
    /// Generate a random G-space file.
    Gen {
        #[arg(long)]
        n: usize,
        /// Also draw a random self-map from the seed.
        #[arg(long)]
        with_map: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxiomSet {
    Metric,
    AlmostMetric,
    Dmetric,
    Gmetric,
    Consequences,
    Chain,
    Lipschitz,
    StrongTriangle,
    /// Every check that applies to the file's kind.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    Ciric,
    AnticipativePhi,
    AnticipativeAlpha,
    Pq,
    Gm,
}

/// One named check in a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl CheckResult {
    fn new(name: impl Into<String>, pass: bool, detail: impl Serialize) -> Self {
        CheckResult { name: name.into(), pass, detail: serde_json::to_value(detail).expect("serializable detail") }
    }

    fn violations(name: &str, reports: Vec<ViolationReport>) -> Self {
        CheckResult::new(name, reports.is_empty(), json!({ "violations": reports }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputError {
    pub id: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<Box<SpaceFileError>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<InputError>,
    pub exit_code: i32,
}

/// What a command run produced; `main` prints it and exits with `code`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl From<crate::Error> for InputError {
    fn from(e: crate::Error) -> Self {
        InputError { id: e.id().into(), message: e.to_string(), context: None }
    }
}

fn input_error(id: &str, message: impl Into<String>) -> InputError {
    InputError { id: id.into(), message: message.into(), context: None }
}

type Step<T> = std::result::Result<T, InputError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if let Command::Gen { n, with_map, out } = &cli.command {
        return generate(&cli, *n, *with_map, out.as_ref(), echo);
    }
    let mut report = Report { command: echo, input_digest: None, checks: Vec::new(), error: None, exit_code: 0 };
    let mut stderr = String::new();
    if let Err(e) = dispatch(&cli, &mut report) {
        stderr = format!("error: {} ({})\n", e.message, e.id);
        report.error = Some(e);
    }
    report.exit_code = if report.error.is_some() {
        2
    } else if report.checks.iter().all(|c| c.pass) {
        0
    } else {
        1
    };
    finish(&cli, report, stderr)
}

fn finish(cli: &Cli, report: Report, mut stderr: String) -> Outcome {
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    let mut code = report.exit_code;
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &text) {
            stderr.push_str(&format!("error: cannot write report to {}: {e}\n", path.display()));
            code = 2;
        }
    }
    Outcome { code, stdout: text, stderr }
}

fn generate(cli: &Cli, n: usize, with_map: bool, out: Option<&PathBuf>, echo: Vec<String>) -> Outcome {
    let table = match random_gmetric(n, cli.seed) {
        Ok(t) => t,
        Err(e) => {
            let report =
                Report { command: echo, input_digest: None, checks: Vec::new(), error: Some(e.into()), exit_code: 2 };
            return finish(cli, report, String::new());
        }
    };
    let mut file = FiniteGspaceFile::from_table(&table);
    if with_map {
        // Separate stream so the table does not depend on whether a map is drawn.
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed ^ 0x6d61_7073);
        file.map = Some((0..n).map(|_| rng.gen_range(0..n)).collect());
    }
    let text = SpaceFile::FiniteGspace(file).to_json();
    match out {
        Some(path) => {
            let digest = format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())));
            let mut report =
                Report { command: echo, input_digest: None, checks: Vec::new(), error: None, exit_code: 0 };
            report.checks.push(CheckResult::new("gen", true, json!({ "path": path, "sha256": digest })));
            if let Err(e) = std::fs::write(path, &text) {
                report.error = Some(input_error("io", format!("cannot write {}: {e}", path.display())));
                report.exit_code = 2;
            }
            finish(cli, report, String::new())
        }
        None => Outcome { code: 0, stdout: text, stderr: String::new() },
    }
}

fn load(path: &PathBuf, report: &mut Report) -> Step<SpaceFile> {
    let bytes = std::fs::read(path).map_err(|e| input_error("io", format!("cannot read {}: {e}", path.display())))?;
    report.input_digest = Some(format!("sha256:{}", hex::encode(Sha256::digest(&bytes))));
    let text = String::from_utf8(bytes).map_err(|_| input_error("syntax", "file is not UTF-8"))?;
    parse_space_file(&text).map_err(|e| InputError {
        id: e.id.into(),
        message: e.to_string(),
        context: Some(Box::new(e)),
    })
}

fn wrong_kind(command: &str, file: &SpaceFile) -> InputError {
    input_error("unsupported-kind", format!("{command} does not apply to {} files", file.kind()))
}

fn require_map(file: &SpaceFile) -> Step<FiniteMap> {
    file.finite_map().ok_or_else(|| input_error("invalid-map", "the file has no map"))
}

fn gmetric_of(file: &FiniteGspaceFile, tol: f64) -> Step<GMetric> {
    Ok(GMetric::new(file.table(), tol)?)
}

/// The binary distance commands iterate with: the table itself, or `d` of a G-space.
fn finite_distance(file: &SpaceFile, tol: f64) -> Step<BinaryTable> {
    match file {
        SpaceFile::FiniteMetric(f) => Ok(f.table()),
        SpaceFile::FiniteGspace(f) => Ok(gmetric_of(f, tol)?.d().clone()),
        SpaceFile::Oracle1d(_) => unreachable!("callers handle oracle files"),
    }
}

fn dispatch(cli: &Cli, report: &mut Report) -> Step<()> {
    let tol = cli.tol;
    if !(tol >= 0.0) {
        return Err(input_error("parameter-out-of-range", format!("tol = {tol} must be >= 0")));
    }
    match &cli.command {
        Command::Check { axioms, file } => {
            let file = load(file, report)?;
            check(&file, *axioms, tol, report)
        }
        Command::Derive { file } => {
            let file = load(file, report)?;
            let SpaceFile::FiniteGspace(f) = &file else { return Err(wrong_kind("derive", &file)) };
            let table = f.table();
            let violations = check_gmetric(&table, tol);
            if !violations.is_empty() {
                report.checks.push(CheckResult::violations("gmetric", violations));
                return Ok(());
            }
            let g = gmetric_of(f, tol)?;
            let m = g.derived();
            let rows = |t: &BinaryTable| -> Vec<Vec<f64>> { t.values().chunks(t.n()).map(<[f64]>::to_vec).collect() };
            report.checks.push(CheckResult::new(
                "derived",
                true,
                json!({ "b": rows(&m.b), "c": rows(&m.c), "d": rows(&m.d), "e": rows(&m.e) }),
            ));
            report.checks.push(CheckResult::new("symmetry", true, is_symmetric(&table, tol)?));
            report.checks.push(CheckResult::violations("b:almost-metric", check_almost_metric(&m.b, tol)));
            report.checks.push(CheckResult::violations("c:almost-metric", check_almost_metric(&m.c, tol)));
            report.checks.push(CheckResult::violations("d:metric", check_metric(&m.d, tol)));
            report.checks.push(CheckResult::violations("e:metric", check_metric(&m.e, tol)));
            Ok(())
        }
        Command::Certify { class, alpha, gamma, phi, file } => {
            let file = load(file, report)?;
            certify(&file, *class, *alpha, *gamma, phi.clone(), tol, report)
        }
        Command::Reduce { gamma, file } => {
            let file = load(file, report)?;
            reduce(cli, &file, *gamma, report)
        }
        Command::Solve { x0, file } => {
            let file = load(file, report)?;
            solve(cli, &file, x0.as_deref(), report)
        }
        Command::Diagnose { phi, gamma, x0, search_cap, file } => {
            let file = load(file, report)?;
            diagnose(cli, &file, phi, *gamma, x0.as_deref(), *search_cap, report)
        }
        Command::Oracle { file } => {
            let file = load(file, report)?;
            oracle(&file, report)
        }
        Command::Gen { .. } => unreachable!("handled before dispatch"),
    }
}

fn check(file: &SpaceFile, axioms: Option<AxiomSet>, tol: f64, report: &mut Report) -> Step<()> {
    use AxiomSet::*;
    match file {
        SpaceFile::FiniteMetric(f) => {
            let table = f.table();
            match axioms.unwrap_or(Metric) {
                Metric | All => report.checks.push(CheckResult::violations("metric", check_metric(&table, tol))),
                AlmostMetric => {
                    report.checks.push(CheckResult::violations("almost-metric", check_almost_metric(&table, tol)))
                }
                _ => return Err(wrong_kind("this axiom set", file)),
            }
        }
        SpaceFile::FiniteGspace(f) => {
            let t = f.table();
            let set = axioms.unwrap_or(Gmetric);
            match set {
                Dmetric => report.checks.push(CheckResult::violations("dmetric", check_dmetric(&t, tol))),
                Gmetric => report.checks.push(CheckResult::violations("gmetric", check_gmetric(&t, tol))),
                Consequences => {
                    report.checks.push(CheckResult::violations("consequences", check_consequences(&t, tol)?))
                }
                Chain => report.checks.push(CheckResult::violations("chain", check_chain(&t, tol)?)),
                Lipschitz => report.checks.push(CheckResult::violations("lipschitz", check_lipschitz(&t, tol)?)),
                StrongTriangle => {
                    report.checks.push(CheckResult::violations("strong-triangle", check_strong_triangle(&t, tol)?))
                }
                All => {
                    let g = check_gmetric(&t, tol);
                    let valid = g.is_empty();
                    report.checks.push(CheckResult::violations("gmetric", g));
                    report.checks.push(CheckResult::violations("dmetric", check_dmetric(&t, tol)));
                    if valid {
                        report.checks.push(CheckResult::violations("consequences", check_consequences(&t, tol)?));
                        report.checks.push(CheckResult::violations("chain", check_chain(&t, tol)?));
                        report.checks.push(CheckResult::violations("strong-triangle", check_strong_triangle(&t, tol)?));
                        if t.n() <= LIPSCHITZ_CAP {
                            report.checks.push(CheckResult::violations("lipschitz", check_lipschitz(&t, tol)?));
                        }
                    }
                }
                Metric | AlmostMetric => return Err(wrong_kind("this axiom set", file)),
            }
        }
        SpaceFile::Oracle1d(_) => return Err(wrong_kind("check", file)),
    }
    Ok(())
}

fn contraction(
    class: ClassArg,
    alpha: Option<f64>,
    gamma: Option<f64>,
    phi: Option<ComparisonFunction>,
) -> Step<Contraction> {
    let need =
        |v: Option<f64>, flag: &str| v.ok_or_else(|| input_error("missing-parameter", format!("--{flag} is required")));
    Ok(match class {
        ClassArg::Ciric => Contraction::Ciric(need(alpha, "alpha")?),
        ClassArg::AnticipativeAlpha => Contraction::AnticipativeAlpha(need(alpha, "alpha")?),
        ClassArg::Pq => Contraction::PqGamma(need(gamma, "gamma")?),
        ClassArg::AnticipativePhi => {
            Contraction::AnticipativePhi(phi.ok_or_else(|| input_error("missing-parameter", "--phi is required"))?)
        }
        ClassArg::Gm => unreachable!("gm is certified on the ternary table"),
    })
}

fn certify(
    file: &SpaceFile,
    class: ClassArg,
    alpha: Option<f64>,
    gamma: Option<f64>,
    phi: Option<ComparisonFunction>,
    tol: f64,
    report: &mut Report,
) -> Step<()> {
    let name = format!("certify:{}", class.to_possible_value().expect("no skipped variants").get_name());
    if class == ClassArg::Gm {
        let SpaceFile::FiniteGspace(f) = file else { return Err(wrong_kind("gm certification", file)) };
        let g = gmetric_of(f, tol)?;
        let gamma = gamma.ok_or_else(|| input_error("missing-parameter", "--gamma is required"))?;
        let cert = certify_gm(&g, &require_map(file)?, gamma, tol)?;
        report.checks.push(CheckResult::new(name, cert.is_certified(), cert));
        return Ok(());
    }
    let class = contraction(class, alpha, gamma, phi)?;
    match file {
        SpaceFile::Oracle1d(o) => {
            let space = o.interval();
            let grid = space.grid(o.samples);
            let sample = format!("grid of {} points on [{}, {}]", o.samples, space.lo, space.hi);
            let map = o.line_map();
            check_in_interval(&space, &map, &grid)?;
            let cert = certify_pairs(&space, &map, &class, grid_pairs(&grid), sample, tol)?;
            report.checks.push(CheckResult::new(name, cert.is_certified(), cert));
        }
        _ => {
            let d = finite_distance(file, tol)?;
            let cert = certify_finite(&d, &require_map(file)?, &class, tol)?;
            report.checks.push(CheckResult::new(name, cert.is_certified(), cert));
        }
    }
    Ok(())
}

fn check_in_interval(space: &Interval, map: &LineMap, points: &[f64]) -> Step<()> {
    use crate::contraction::SelfMap;
    use crate::metric::Space;
    match points.iter().find(|&&p| !space.contains(map.apply(p))) {
        Some(p) => Err(input_error("invalid-map", format!("{map} sends {p} outside [{}, {}]", space.lo, space.hi))),
        None => Ok(()),
    }
}

fn trace_summary<P: Serialize + Clone>(trace: &PicardTrace<P>) -> Value {
    json!({
        "x0": trace.x0,
        "steps": trace.steps(),
        "stop_reason": trace.stop_reason,
        "candidate": trace.candidate,
        "cycle": trace.cycle,
        "iterates": trace.iterates,
        "rho": trace.rho,
    })
}

fn converged<P>(trace: &PicardTrace<P>) -> bool {
    trace.candidate.is_some() && trace.stop_reason != StopReason::MaxIter
}

fn parse_label(x0: &str, n: usize) -> Step<usize> {
    let p: usize = x0.parse().map_err(|_| input_error("invalid-value", format!("--x0 {x0} is not a point label")))?;
    if p >= n {
        return Err(crate::Error::PointOutOfRange { point: p, n }.into());
    }
    Ok(p)
}

fn parse_real(x0: Option<&str>, space: &Interval) -> Step<f64> {
    let Some(x0) = x0 else { return Ok(space.hi) };
    let p: f64 = x0.parse().map_err(|_| input_error("invalid-value", format!("--x0 {x0} is not a number")))?;
    if !(p >= space.lo && p <= space.hi) {
        return Err(input_error("point-out-of-range", format!("--x0 {p} is outside [{}, {}]", space.lo, space.hi)));
    }
    Ok(p)
}

fn solve(cli: &Cli, file: &SpaceFile, x0: Option<&str>, report: &mut Report) -> Step<()> {
    match file {
        SpaceFile::Oracle1d(o) => {
            let space = o.interval();
            let x0 = parse_real(x0, &space)?;
            let trace = iterate(&space, &o.line_map(), x0, cli.fp_tol, cli.max_iter)?;
            report.checks.push(CheckResult::new("solve", converged(&trace), trace_summary(&trace)));
        }
        _ => {
            let d = finite_distance(file, cli.tol)?;
            let map = require_map(file)?;
            let starts: Vec<usize> = match x0 {
                Some(x0) => vec![parse_label(x0, d.n())?],
                None => (0..d.n()).collect(),
            };
            for x0 in starts {
                let trace = iterate(&d, &map, x0, cli.fp_tol, cli.max_iter)?;
                report.checks.push(CheckResult::new(format!("solve:{x0}"), converged(&trace), trace_summary(&trace)));
            }
        }
    }
    Ok(())
}

fn diagnose(
    cli: &Cli,
    file: &SpaceFile,
    phi: &ComparisonFunction,
    gamma: Option<f64>,
    x0: Option<&str>,
    search_cap: f64,
    report: &mut Report,
) -> Step<()> {
    let tol = cli.tol;
    let mut push = |trace_value: Value,
                    envelope: crate::picard::EnvelopeReport,
                    rate: Option<Vec<crate::picard::BoundCheck>>| {
        report.checks.push(CheckResult::new("trace", true, trace_value));
        report.checks.push(CheckResult::new(
            "beta-bound",
            envelope.prefix.iter().all(|c| c.pass),
            json!({ "alpha": envelope.alpha, "beta": envelope.beta, "already_fixed": envelope.already_fixed, "prefix": envelope.prefix }),
        ));
        report.checks.push(CheckResult::new(
            "envelope",
            envelope.tail.iter().all(|c| c.pass),
            json!({ "evidence": "tail diameters of the finite trace", "tail": envelope.tail }),
        ));
        if let Some(rate) = rate {
            report.checks.push(CheckResult::new("rate", rate.iter().all(|c| c.pass), json!({ "checks": rate })));
        }
    };
    match file {
        SpaceFile::Oracle1d(o) => {
            let space = o.interval();
            let trace = iterate(&space, &o.line_map(), parse_real(x0, &space)?, cli.fp_tol, cli.max_iter)?;
            let env = beta_bound_check(&space, &trace, phi, search_cap, tol)?.with_tail(&space, &trace, phi, tol);
            let rate = gamma.map(|g| rate_check(&trace, g, tol)).transpose()?;
            push(trace_summary(&trace), env, rate);
        }
        _ => {
            let d = finite_distance(file, tol)?;
            let map = require_map(file)?;
            let x0 = match x0 {
                Some(x0) => parse_label(x0, d.n())?,
                None => 0,
            };
            let trace = iterate(&d, &map, x0, cli.fp_tol, cli.max_iter)?;
            let env = beta_bound_check(&d, &trace, phi, search_cap, tol)?.with_tail(&d, &trace, phi, tol);
            let rate = gamma.map(|g| rate_check(&trace, g, tol)).transpose()?;
            push(trace_summary(&trace), env, rate);
        }
    }
    Ok(())
}

fn oracle(file: &SpaceFile, report: &mut Report) -> Step<()> {
    match file {
        SpaceFile::Oracle1d(o) => {
            let space = o.interval();
            let fixed = match o.line_map() {
                LineMap::Identity => json!("every point"),
                LineMap::Scale { k: 1.0 } => json!("every point"),
                LineMap::Scale { .. } => json!(if space.lo <= 0.0 && 0.0 <= space.hi { vec![0.0] } else { vec![] }),
                LineMap::Affine { a: 1.0, b } => json!(if b == 0.0 { "every point" } else { "none" }),
                LineMap::Affine { a, b } => {
                    let z = b / (1.0 - a);
                    json!(if space.lo <= z && z <= space.hi { vec![z] } else { vec![] })
                }
            };
            report.checks.push(CheckResult::new("fixpoints", true, json!({ "fixpoints": fixed })));
        }
        _ => {
            let fixed = brute_fixpoints(&require_map(file)?);
            report.checks.push(CheckResult::new(
                "fixpoints",
                true,
                json!({ "fixpoints": fixed, "count": fixed.len() }),
            ));
        }
    }
    Ok(())
}

/// check_gmetric, derived d, strong triangle, reduction inequalities,
/// gm and pq certificates, solving from every start against the fixed-point
/// scan, then d- and G-convergence of each trace to its candidate.
fn reduce(cli: &Cli, file: &SpaceFile, gamma: f64, report: &mut Report) -> Step<()> {
    let tol = cli.tol;
    let SpaceFile::FiniteGspace(f) = file else { return Err(wrong_kind("reduce", file)) };
    let map = require_map(file)?;
    let table = f.table();
    let violations = check_gmetric(&table, tol);
    if !violations.is_empty() {
        report.checks.push(CheckResult::violations("gmetric", violations));
        return Ok(());
    }
    report.checks.push(CheckResult::violations("gmetric", violations));
    let g = gmetric_of(f, tol)?;
    report.checks.push(CheckResult::violations("d:metric", check_metric(g.d(), tol)));
    report.checks.push(CheckResult::violations("strong-triangle", check_strong_triangle(&table, tol)?));
    report.checks.push(CheckResult::violations("reduction", check_reduction(&g, &map, tol)?));
    let gm = certify_gm(&g, &map, gamma, tol)?;
    report.checks.push(CheckResult::new("certify:gm", gm.is_certified(), &gm));
    let pq = certify_finite(g.d(), &map, &Contraction::PqGamma(gamma), tol)?;
    let pq_ok = pq.is_certified();
    report.checks.push(CheckResult::new("certify:pq", pq_ok, &pq));
    if !pq_ok {
        return Ok(());
    }
    let fixed = brute_fixpoints(&map);
    let unique = fixed.len() == 1;
    report.checks.push(CheckResult::new("unique-fixpoint", unique, json!({ "fixpoints": fixed })));
    for x0 in 0..g.n() {
        let trace = iterate(g.d(), &map, x0, cli.fp_tol, cli.max_iter)?;
        let hits = converged(&trace) && unique && trace.candidate == Some(fixed[0]);
        let (d_conv, g_conv) = match trace.candidate {
            Some(z) => {
                let window = trace.iterates.len().min(2);
                (
                    converges_prefix(g.d(), &trace.iterates, z, tol, window)?,
                    g_converges_prefix(g.table(), &trace.iterates, z, 2.0 * tol, window)?,
                )
            }
            None => (false, false),
        };
        report.checks.push(CheckResult::new(
            format!("solve:{x0}"),
            hits && d_conv && g_conv,
            json!({ "trace": trace_summary(&trace), "d_converges": d_conv, "g_converges": g_conv }),
        ));
    }
    Ok(())
}
