//! Command-line front end. The binary is a thin wrapper around [`run`].

use crate::certify::{Interval, VerdictKind};
use crate::decide::{check_copositivity, CheckOptions, Decision, Method, SupportClass, Timing};
use crate::error::{Error, Result};
use crate::geometry::{
    hull_vertices, is_nonseparable, simplices_containing_cell, find_cell_witness, smallest_face_containing,
    truncation_face_set, LatticePoint, SeparabilityDiagnostic,
};
use crate::signomial::{parse_json, parse_text, sign_precheck, to_text, HeightFunction, SignClass, Signomial};
use crate::sonc::{sonc_certificate, verify_certificate};
use crate::tracker::{reduce_problem, write_trace_csv, TrackerConfig};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

pub const EXIT_COPOSITIVE: i32 = 0;
pub const EXIT_NOT_COPOSITIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 64;

pub const MAX_VARIABLES: usize = 8;
pub const MAX_TERMS: usize = 40;

#[derive(Debug, Parser)]
#[command(name = "copositive", version, about = "Decide copositivity of sparse Laurent polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide copositivity and report the verdict.
    Check(CheckArgs),
    /// Emit a SONC certificate for a copositive polynomial.
    Sonc(SoncArgs),
    /// Classify the signed support.
    Support(SupportArgs),
    /// Run `check` on every line of an NDJSON file.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Polynomial in the text grammar or as JSON; `-` reads standard input.
    pub poly: Option<String>,
    /// Read the polynomial from a file instead.
    #[arg(long, short = 'f', conflicts_with = "poly")]
    pub file: Option<PathBuf>,
    /// Lift the size guardrails.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Height function: `uniform`, one height for all of A-, or a list.
    #[arg(long = "h", default_value = "uniform")]
    pub heights: String,
    /// Newton tolerance on the row-scaled residual.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Cap on path-tracking step attempts
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    /// Assert nonseparability and skip the test.
    #[arg(long)]
    pub nonseparable: bool,
    /// Seed of the fallback search.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Skip interval certification; the verdict is marked uncertified
    #[arg(long)]
    pub no_certify: bool,
    /// Also build a SONC certificate when the verdict is copositive.
    #[arg(long)]
    pub sonc: bool,
    /// Print the report as JSON
    #[arg(long)]
    pub json: bool,
    /// Write the path trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SoncArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Emit a certificate even when t* is not certified away from 1.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SupportArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BatchArgs {
    /// NDJSON file, one polynomial per line (a JSON string in the text
    /// grammar or a JSON polynomial object); `-` reads standard input.
    pub file: PathBuf,
    #[command(flatten)]
    pub solve: SolveArgs,
    /// Skip interval certification; the verdict is marked uncertified
    #[arg(long)]
    pub no_certify: bool,
    /// Worker threads; output order does not depend on it
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Lift the size guardrails.
    #[arg(long)]
    pub allow_large: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<&'static str>,
}

impl ErrorReport {
    pub fn from_error(e: &Error) -> Self {
        let (kind, line, column, hint) = match e {
            Error::Parse { line, column, .. } => ("parse", Some(*line), Some(*column), None),
            Error::Input(_) => ("input", None, None, None),
            Error::Geometry(_) => ("geometry", None, None, None),
            Error::Contract(_) => (
                "contract",
                None,
                None,
                Some("drop --nonseparable so that separable supports use the fallback search"),
            ),
            Error::Numeric(_) => ("numeric", None, None, Some("try a looser --tol or a larger --max-steps")),
            Error::NotCopositive(_) => ("not_copositive", None, None, None),
        };
        ErrorReport { kind, message: e.to_string(), line, column, hint }
    }
}

pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Input(_) => EXIT_INPUT_ERROR,
        Error::NotCopositive(_) => EXIT_NOT_COPOSITIVE,
        _ => EXIT_INCONCLUSIVE,
    }
}

/// One `check` result; the JSON layout is documented in `docs/report-schema.md`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    pub input: String,
    pub n: Option<usize>,
    pub terms: Option<usize>,
    pub classification: Option<SupportClass>,
    pub gamma_size: Option<usize>,
    pub j_size: Option<usize>,
    pub method: Option<Method>,
    pub t_star: Option<f64>,
    pub t_interval: Option<Interval>,
    pub verdict: Option<VerdictKind>,
    pub certified: bool,
    pub exit_code: i32,
    pub endpoint_det: Option<f64>,
    pub details: Vec<String>,
    pub warnings: Vec<String>,
    pub timing: Option<Timing>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sonc: Option<Value>,
    pub error: Option<ErrorReport>,
}

impl Report {
    pub fn from_decision(f: &Signomial, d: &Decision) -> Self {
        Report {
            line: None,
            input: to_text(f),
            n: Some(f.n()),
            terms: Some(f.len()),
            classification: Some(d.classification),
            gamma_size: d.gamma_size,
            j_size: d.j_size,
            method: Some(d.method),
            t_star: d.track.as_ref().filter(|t| t.converged).map(|t| t.t_star),
            t_interval: d.verdict.t_interval,
            verdict: Some(d.verdict.kind),
            certified: d.verdict.certified,
            exit_code: d.verdict.exit_code(),
            endpoint_det: d.endpoint_det,
            details: d.verdict.details.clone(),
            warnings: d.warnings.clone(),
            timing: Some(d.timing.clone()),
            sonc: None,
            error: None,
        }
    }

    pub fn from_error(input: &str, e: &Error) -> Self {
        Report {
            line: None,
            input: input.to_string(),
            n: None,
            terms: None,
            classification: None,
            gamma_size: None,
            j_size: None,
            method: None,
            t_star: None,
            t_interval: None,
            verdict: None,
            certified: false,
            exit_code: exit_code_for_error(e),
            endpoint_det: None,
            details: vec![],
            warnings: vec![],
            timing: None,
            sonc: None,
            error: Some(ErrorReport::from_error(e)),
        }
    }
}

/// Text grammar, or the JSON format when the input starts with `{`.
pub fn parse_input(src: &str) -> Result<Signomial> {
    if src.trim_start().starts_with('{') {
        parse_json(src)
    } else {
        parse_text(src)
    }
}

pub fn check_guardrails(f: &Signomial, allow_large: bool) -> Result<()> {
    if !allow_large && (f.n() > MAX_VARIABLES || f.len() > MAX_TERMS) {
        return Err(Error::Input(format!(
            "{} variables and {} terms exceed the limits of {MAX_VARIABLES} and {MAX_TERMS}; pass --allow-large to proceed",
            f.n(),
            f.len()
        )));
    }
    Ok(())
}

fn read_source(input: &InputArgs) -> Result<String> {
    let io_err = |e: std::io::Error| Error::Input(format!("cannot read input: {e}"));
    match (&input.poly, &input.file) {
        (_, Some(path)) => std::fs::read_to_string(path).map_err(io_err),
        (Some(p), None) if p == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
        (Some(p), None) => Ok(p.clone()),
        (None, None) => Err(Error::Input("no polynomial given".into())),
    }
}

fn options(solve: &SolveArgs, certify: bool) -> CheckOptions {
    CheckOptions {
        tracker: TrackerConfig { newton_tol: solve.tol, max_steps: solve.max_steps, ..TrackerConfig::default() },
        certify,
        assume_nonseparable: solve.nonseparable,
        seed: solve.seed,
        ..CheckOptions::default()
    }
}

fn load(input: &InputArgs) -> Result<(String, Signomial)> {
    let src = read_source(input)?;
    let f = parse_input(&src)?;
    check_guardrails(&f, input.allow_large)?;
    Ok((src, f))
}

/// Parse, decide and report one polynomial.
pub fn check_one(f: &Signomial, solve: &SolveArgs, certify: bool) -> Result<(Decision, Report)> {
    let h = HeightFunction::parse(&solve.heights, f.support())?;
    let d = check_copositivity(f, &h, &options(solve, certify))?;
    let r = Report::from_decision(f, &d);
    Ok((d, r))
}

fn write_json(out: &mut dyn Write, v: &impl Serialize) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn human(out: &mut dyn Write, r: &Report) {
    let _ = writeln!(out, "input: {}", r.input);
    if let Some(e) = &r.error {
        let _ = writeln!(out, "error: {}", e.message);
        if let Some(h) = e.hint {
            let _ = writeln!(out, "hint: {h}");
        }
        return;
    }
    let v = r.verdict.expect("verdict present without error");
    let _ = writeln!(out, "verdict: {v:?} ({})", if r.certified { "certified" } else { "not certified" });
    if let Some(c) = r.classification {
        let _ = writeln!(out, "support: {c:?}, method: {:?}", r.method.unwrap_or(Method::Precheck));
    }
    if let (Some(g), Some(j)) = (r.gamma_size, r.j_size) {
        let _ = writeln!(out, "face terms: {g}, faces meeting A-: {j}");
    }
    if let Some(t) = r.t_star {
        let _ = writeln!(out, "t*: {t:.15e}");
    }
    if let Some(i) = r.t_interval {
        let _ = writeln!(out, "t* in {i}");
    }
    for d in &r.details {
        let _ = writeln!(out, "  {d}");
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
}

pub fn cmd_check(args: &CheckArgs, out: &mut dyn Write) -> i32 {
    let (src, f) = match load(&args.input) {
        Ok(v) => v,
        Err(e) => return report_error(out, args.json, &args.input.poly.clone().unwrap_or_default(), &e),
    };
    let solve = &args.solve;
    let h = match HeightFunction::parse(&solve.heights, f.support()) {
        Ok(h) => h,
        Err(e) => return report_error(out, args.json, &src, &e),
    };
    let mut opts = options(solve, !args.no_certify);
    opts.tracker.trace = args.trace.is_some();
    let d = match check_copositivity(&f, &h, &opts) {
        Ok(d) => d,
        Err(e) => return report_error(out, args.json, &src, &e),
    };
    if let (Some(path), Some(track)) = (&args.trace, &d.track) {
        let res = std::fs::File::create(path).map_err(|e| e.to_string()).and_then(|file| {
            write_trace_csv(&track.trace, std::io::BufWriter::new(file)).map_err(|e| e.to_string())
        });
        if let Err(e) = res {
            return report_error(out, args.json, &src, &Error::Input(format!("cannot write trace: {e}")));
        }
    }
    let mut r = Report::from_decision(&f, &d);
    if args.sonc && matches!(r.verdict, Some(VerdictKind::Copositive | VerdictKind::TriviallyCopositive)) {
        r.sonc = Some(match sonc_certificate(&f, &h, &opts.tracker) {
            Ok(c) => {
                let mut v = c.to_json();
                v["verification"] = serde_json::to_value(verify_certificate(&c)).expect("serializable");
                v
            }
            Err(e) => json!({ "error": ErrorReport::from_error(&e) }),
        });
    }
    if args.json {
        write_json(out, &r);
    } else {
        human(out, &r);
        if let Some(s) = &r.sonc {
            let _ = writeln!(out, "sonc: {s}");
        }
    }
    r.exit_code
}

fn report_error(out: &mut dyn Write, json: bool, input: &str, e: &Error) -> i32 {
    let r = Report::from_error(input, e);
    if json {
        write_json(out, &r);
    } else {
        human(out, &r);
    }
    r.exit_code
}

pub fn cmd_sonc(args: &SoncArgs, out: &mut dyn Write) -> i32 {
    let fail = |out: &mut dyn Write, e: &Error| {
        write_json(out, &json!({ "error": ErrorReport::from_error(e) }));
        exit_code_for_error(e)
    };
    let (_, f) = match load(&args.input) {
        Ok(v) => v,
        Err(e) => return fail(out, &e),
    };
    let h = match HeightFunction::parse(&args.solve.heights, f.support()) {
        Ok(h) => h,
        Err(e) => return fail(out, &e),
    };
    if sign_precheck(&f).ok() == Some(SignClass::NeedsCriterion) && !args.solve.nonseparable {
        let nonsep = reduce_problem(&f, &h).and_then(|rp| is_nonseparable(rp.reduced.support()).map(|r| r.0));
        match nonsep {
            Ok(true) => {}
            Ok(false) => {
                write_json(out, &json!({ "error": { "kind": "unsupported", "message": "unsupported: separable support" } }));
                return EXIT_INCONCLUSIVE;
            }
            Err(e) => return fail(out, &e),
        }
    }
    let cert = match sonc_certificate(&f, &h, &options(&args.solve, true).tracker) {
        Ok(c) => c,
        Err(e) => return fail(out, &e),
    };
    let near = cert.warnings.iter().any(|w| w.starts_with(crate::sonc::NEAR_BOUNDARY));
    if near && !args.force {
        write_json(
            out,
            &json!({ "error": { "kind": "near_boundary", "message": "t* is not certified away from 1; pass --force to emit the certificate anyway" }, "warnings": cert.warnings }),
        );
        return EXIT_INCONCLUSIVE;
    }
    let report = verify_certificate(&cert);
    let mut v = cert.to_json();
    v["input"] = json!(to_text(&f));
    v["verification"] = serde_json::to_value(&report).expect("serializable");
    write_json(out, &v);
    if report.pass && !near {
        EXIT_COPOSITIVE
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn support_json(f: &Signomial) -> Result<Value> {
    let sup = f.support();
    let all = sup.all();
    let pts = |idx: &[usize]| -> Vec<LatticePoint> { idx.iter().map(|&i| all[i].clone()).collect() };
    let vertices = pts(&hull_vertices(&all)?);
    let mut v = json!({
        "input": to_text(f),
        "n": f.n(),
        "a_plus": sup.a_plus(),
        "a_minus": sup.a_minus(),
        "hull_vertices": vertices,
    });
    match sign_precheck(f)? {
        SignClass::TriviallyCopositive => {
            v["classification"] = json!("trivially copositive support");
            return Ok(v);
        }
        SignClass::TriviallyNegative => {
            v["classification"] = json!("trivially negative support");
            return Ok(v);
        }
        SignClass::NeedsCriterion => {}
    }
    let gamma = smallest_face_containing(sup, sup.a_minus())?;
    let faces_j = truncation_face_set(&gamma, sup)?;
    v["gamma"] = json!(pts(&gamma.points));
    v["j"] = json!(faces_j.iter().map(|fc| pts(&fc.points)).collect::<Vec<_>>());
    let rp = reduce_problem(f, &HeightFunction::uniform(sup))?;
    let red = rp.reduced.support();
    let (nonsep, diag) = is_nonseparable(red)?;
    v["nonseparable"] = json!(nonsep);
    v["classification"] = json!(if nonsep { "nonseparable" } else { "separable" });
    if nonsep {
        let w = find_cell_witness(red)?;
        v["lambda_size"] = json!(simplices_containing_cell(red, &w)?.simplices.len());
    }
    if let Some(diag) = diag {
        let back = |i: usize| rp.map.inverse(&red.a_plus()[i]);
        v["diagnostic"] = match diag {
            SeparabilityDiagnostic::NotInRelativeInterior { point } => {
                json!({ "not_in_relative_interior": rp.map.inverse(&point) })
            }
            SeparabilityDiagnostic::NoCommonCell { split } => {
                let sorted = |idx: &[usize]| {
                    let mut pts: Vec<_> = idx.iter().map(|&i| back(i)).collect();
                    pts.sort();
                    pts
                };
                // Report sides in the order of the input's negative terms.
                let side_of = |s: &crate::geometry::HyperplaneReport| -> Vec<_> {
                    f.support()
                        .a_minus()
                        .iter()
                        .map(|p| {
                            let k = red.a_minus().iter().position(|q| rp.map.inverse(q) == *p);
                            k.map(|k| s.minus_sides[k])
                        })
                        .collect()
                };
                json!({
                    "no_common_cell": true,
                    "violating_hyperplane": split.map(|s| json!({
                        "spanning": sorted(&s.spanning),
                        "members": sorted(&s.members),
                        "minus_sides": side_of(&s),
                    })),
                })
            }
        };
    }
    Ok(v)
}

pub fn cmd_support(args: &SupportArgs, out: &mut dyn Write) -> i32 {
    match load(&args.input).and_then(|(_, f)| support_json(&f)) {
        Ok(v) => {
            write_json(out, &v);
            EXIT_COPOSITIVE
        }
        Err(e) => {
            write_json(out, &json!({ "error": ErrorReport::from_error(&e) }));
            exit_code_for_error(&e)
        }
    }
}

fn batch_line(line: &str, args: &BatchArgs) -> Report {
    let parsed = serde_json::from_str::<Value>(line)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
        .and_then(|v| match v {
            Value::String(s) => parse_text(&s),
            Value::Object(_) => parse_json(line),
            _ => Err(Error::Input("expected a JSON string or polynomial object".into())),
        })
        .and_then(|f| check_guardrails(&f, args.allow_large).map(|_| f));
    match parsed.and_then(|f| check_one(&f, &args.solve, !args.no_certify)) {
        Ok((_, r)) => r,
        Err(e) => Report::from_error(line, &e),
    }
}

/// Reports for the non-empty lines of `input`, in input order.
pub fn run_batch(input: &str, args: &BatchArgs) -> Vec<Report> {
    let lines: Vec<(usize, &str)> =
        input.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).map(|(i, l)| (i + 1, l)).collect();
    let work = || {
        lines
            .par_iter()
            .map(|(no, l)| {
                let mut r = batch_line(l, args);
                r.line = Some(*no);
                r
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

pub fn cmd_batch(args: &BatchArgs, out: &mut dyn Write) -> i32 {
    let text = if args.file.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(&args.file)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            let e = Error::Input(format!("cannot read {}: {e}", args.file.display()));
            write_json(out, &json!({ "error": ErrorReport::from_error(&e) }));
            return EXIT_INPUT_ERROR;
        }
    };
    for r in run_batch(&text, args) {
        let _ = writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"));
    }
    EXIT_COPOSITIVE
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_COPOSITIVE };
            let _ = if e.use_stderr() { write!(err, "{}", e.render()) } else { write!(out, "{}", e.render()) };
            return code;
        }
    };
    match &cli.command {
        Command::Check(a) => cmd_check(a, out),
        Command::Sonc(a) => cmd_sonc(a, out),
        Command::Support(a) => cmd_support(a, out),
        Command::Batch(a) => cmd_batch(a, out),
    }
}
