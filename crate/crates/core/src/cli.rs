//! The `tdlc` command line: load a problem document, run a computation and
//! print a human-readable or JSON report.
//!
//! Exit codes: 0 success, 1 property failure, 2 input error, 3 inconclusive.
//! A report is printed whatever the outcome.

use crate::certificate::{CertKind, Certificate};
use crate::engine::{self, Config, Universe};
use crate::error::Error;
use crate::finite::ENDO_CAP;
use crate::fixtures;
use crate::properties::{self, Case, SUITES};
use crate::schema::{self, Problem};
use crate::seq::EpcSubgroup;
use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "tdlc", version, about = "Scale, tidy subgroups and the tidying procedure for endomorphisms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Problem document (JSON, schema 1); `-` reads standard input.
    #[arg(long, global = true, value_name = "FILE")]
    pub input: Option<String>,
    /// Name of the subgroup to work on.
    #[arg(long, global = true, value_name = "NAME")]
    pub subgroup: Option<String>,
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock timing in the report (makes JSON output vary
    /// between runs).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Longest chain explored when looking for a limit.
    #[arg(long, global = true, value_name = "N", default_value_t = Config::default().fixpoint_horizon)]
    pub horizon: usize,
    /// Longest window, in coordinates, used to read off images.
    #[arg(long, global = true, value_name = "N", default_value_t = Config::default().state_bound)]
    pub state_bound: usize,
    /// Number of terms in Möller's index log.
    #[arg(long, global = true, value_name = "N", default_value_t = Config::default().moller_n)]
    pub moller_n: usize,
    /// Seed for sampled endomorphisms.
    #[arg(long, global = true, value_name = "N", default_value_t = Config::default().seed)]
    pub seed: u64,
}

impl Opts {
    pub fn config(&self) -> Config {
        Config {
            fixpoint_horizon: self.horizon,
            state_bound: self.state_bound,
            moller_n: self.moller_n,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// The scale of the endomorphism, with a tidy witness when available.
    Scale,
    /// The tidying procedure started from a subgroup.
    Tidy,
    /// Property suites over the finite catalog (or over the input).
    Check(CheckArgs),
    /// Run the built-in worked examples.
    Examples(ExamplesArgs),
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Suites to run (repeatable); all of them by default.
    #[arg(long = "property", value_name = "NAME", value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    pub properties: Vec<String>,
    /// Largest group order taken from the catalog.
    #[arg(long, value_name = "N", default_value_t = 12)]
    pub max_order: usize,
    /// Candidate generator images examined per group before sampling.
    #[arg(long, value_name = "N", default_value_t = ENDO_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug)]
pub struct ExamplesArgs {
    /// Fixtures to run; all of them by default.
    pub names: Vec<String>,
    /// List the fixtures instead of running them.
    #[arg(long)]
    pub list: bool,
}

/// A finished command: the results document, the text rendering and the
/// exit code.
struct Outcome {
    results: Value,
    text: String,
    code: i32,
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(Error::Inconclusive { .. }) => EXIT_INCONCLUSIVE,
        Some(Error::Postcondition(_)) => EXIT_PROPERTY,
        Some(_) => EXIT_INPUT,
        // I/O and other failures concern the input.
        None => EXIT_INPUT,
    }
}

fn cert_text(c: &Certificate) -> String {
    match c.kind {
        CertKind::Exact => "exact".into(),
        CertKind::HorizonCertified => format!("certified to horizon {}", c.horizon.unwrap_or(0)),
        CertKind::Inconclusive => format!("inconclusive at horizon {}", c.horizon.unwrap_or(0)),
    }
}

/// The first few pieces of evidence; the JSON report carries all of them.
fn evidence_text(c: &Certificate) -> String {
    const SHOWN: usize = 4;
    let mut t: String = c.evidence.iter().take(SHOWN).map(|ev| format!("  evidence: {ev}\n")).collect();
    if c.evidence.len() > SHOWN {
        t += &format!("  … and {} more (see --json)\n", c.evidence.len() - SHOWN);
    }
    t
}

fn cert_code(c: &Certificate) -> i32 {
    if c.is_inconclusive() {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_OK
    }
}

fn read_input(opts: &Opts) -> anyhow::Result<(String, String)> {
    let path = opts.input.as_deref().ok_or_else(|| Error::Input("this command needs --input FILE".into()))?;
    let text = if path == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading standard input")?
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    let digest = format!("sha256:{:x}", Sha256::digest(text.as_bytes()));
    Ok((text, digest))
}

/// The subgroup to work on: the named one, else the only one given, else
/// the default (`G` for finite groups, `F_p[[t]]` for Laurent series).
fn pick<S: Clone>(
    subs: &BTreeMap<String, S>,
    name: Option<&str>,
    default: impl FnOnce() -> (String, S),
) -> anyhow::Result<(String, S)> {
    if let Some(n) = name {
        let s = subs.get(n).ok_or_else(|| {
            let known: Vec<&str> = subs.keys().map(String::as_str).collect();
            Error::Input(format!("no subgroup named {n:?} (have: {})", known.join(", ")))
        })?;
        return Ok((n.to_string(), s.clone()));
    }
    let named: Vec<(&String, &S)> = subs.iter().filter(|(k, _)| k.as_str() != "G").collect();
    match named.as_slice() {
        [] => Ok(subs.get("G").map(|g| ("G".to_string(), g.clone())).unwrap_or_else(default)),
        [(k, s)] => Ok(((*k).clone(), (*s).clone())),
        _ => Err(Error::Input("the input names several subgroups; choose one with --subgroup".into()).into()),
    }
}

fn scale_on<U: Universe>(u: &U, e: &U::Endo, name: &str, s: &U::Subgroup, cfg: &Config) -> anyhow::Result<Outcome> {
    let r = engine::scale(u, e, s, cfg)?;
    let witness = r.witness.as_ref().map(|w| u.describe(w));
    let log: Vec<Value> = r.index_log.iter().map(|(n, a)| json!([n, a])).collect();
    let mut text = format!("scale = {} ({}, via {})\n", r.scale, cert_text(&r.certificate), r.method);
    text += &format!("seed subgroup: {name}\n");
    if let Some(w) = &witness {
        text += &format!("tidy witness: {w}\n");
    }
    text += &evidence_text(&r.certificate);
    Ok(Outcome {
        results: json!({
            "subgroup": name, "scale": r.scale, "method": r.method,
            "certificate": r.certificate, "index_log": log, "witness": witness,
        }),
        text,
        code: cert_code(&r.certificate),
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn tidy_on<U: Universe>(u: &U, e: &U::Endo, name: &str, s: &U::Subgroup, cfg: &Config) -> anyhow::Result<Outcome> {
    let input = engine::check_tidy(u, e, s, cfg)?;
    let mut text = format!(
        "{name}: displacement {}; tidy above {}, tidy below {} (first condition {}, second {})\n",
        input.displacement,
        yes(input.ta),
        yes(input.tb1 && input.tb2),
        yes(input.tb1),
        yes(input.tb2)
    );
    for w in &input.witnesses {
        text += &format!("  witness: {w}\n");
    }
    let trace = engine::tidying_procedure(u, e, s, cfg)?;
    let ds: Vec<String> = trace.displacements.iter().map(|d| d.to_string()).collect();
    text += &format!("stage 1: N = {}, V = {}\n", trace.n, u.describe(&trace.v));
    text += &format!("stage 2: L_V = {} ({})\n", u.describe(&trace.l), cert_text(&trace.l_certificate));
    text += &format!("stage 3: W = {}\n", u.describe(&trace.w));
    text += &format!("displacements: {}\n", ds.join(" -> "));
    text += &format!(
        "W is {} ({})\n",
        if trace.report.tidy() { "tidy" } else { "NOT tidy" },
        cert_text(&trace.certificate)
    );
    let code = if !trace.report.tidy() { EXIT_PROPERTY } else { cert_code(&trace.certificate) };
    Ok(Outcome { results: json!({"subgroup": name, "input_report": input, "trace": trace}), text, code })
}

fn with_problem(
    opts: &Opts,
    finite: impl FnOnce(&schema::FiniteProblem, &str, &crate::finite::FiniteSubgroup) -> anyhow::Result<Outcome>,
    laurent: impl FnOnce(&schema::LaurentProblem, &str, &EpcSubgroup) -> anyhow::Result<Outcome>,
) -> anyhow::Result<Outcome> {
    let (text, _) = read_input(opts)?;
    match schema::parse_problem(&text)? {
        Problem::Finite(p) => {
            let (name, s) = pick(&p.subgroups, opts.subgroup.as_deref(), || ("G".into(), p.universe.whole_group()))?;
            finite(&p, &name, &s)
        }
        Problem::Laurent(p) => {
            let ps = EpcSubgroup::power_series(p.universe.field().p(), 0);
            let (name, s) = pick(&p.subgroups, opts.subgroup.as_deref(), || ("O".into(), ps))?;
            laurent(&p, &name, &s)
        }
    }
}

fn cmd_check(opts: &Opts, args: &CheckArgs) -> anyhow::Result<Outcome> {
    let cfg = opts.config();
    let (cases, scope) = match &opts.input {
        Some(_) => {
            let (text, _) = read_input(opts)?;
            let Problem::Finite(p) = schema::parse_problem(&text)? else {
                return Err(Error::Capability("property suites run on finite groups".into()).into());
            };
            let u = Arc::new(p.universe);
            let subgroups = Arc::new(u.subgroups()?);
            (vec![Case { key: "input".into(), universe: u, subgroups, endo: p.endo }], "the input".to_string())
        }
        None => {
            let mut c = properties::corpus(args.max_order, args.cap, cfg.seed)?;
            c.cases.extend(properties::fixture_cases()?);
            let how = if c.exhaustive { "all endomorphisms" } else { "sampled endomorphisms" };
            let n = c.cases.len();
            (
                c.cases,
                format!(
                    "{n} cases: catalog groups of order ≤ {} with {how}, plus fixture endomorphisms",
                    args.max_order
                ),
            )
        }
    };
    let suites: Vec<&str> =
        if args.properties.is_empty() { SUITES.to_vec() } else { args.properties.iter().map(String::as_str).collect() };
    let mut text = format!("checking {scope}\n");
    let mut reports = Vec::new();
    let mut code = EXIT_OK;
    for s in suites {
        let r = properties::run_suite(s, &cases, &cfg)?;
        if r.passed() {
            text += &format!("PASS {s}: {} checks\n", r.checks);
        } else {
            code = EXIT_PROPERTY;
            text += &format!("FAIL {s}: {} of {} checks failed\n", r.failures.len(), r.checks);
            let first = &r.failures[0];
            text += &format!("  {}: {}\n  counterexample: {}\n", first.case, first.detail, first.fixture);
        }
        reports.push(r);
    }
    Ok(Outcome { results: json!({"scope": scope, "suites": reports}), text, code })
}

fn cmd_examples(opts: &Opts, args: &ExamplesArgs) -> anyhow::Result<Outcome> {
    if args.list {
        let all = fixtures::registry()?;
        let text = all
            .iter()
            .map(|f| format!("{:<32} {:<10} {}\n", f.name, json!(f.source).as_str().unwrap_or(""), f.description))
            .collect();
        let list: Vec<Value> =
            all.iter().map(|f| json!({"name": f.name, "source": f.source, "description": f.description})).collect();
        return Ok(Outcome { results: json!({"fixtures": list}), text, code: EXIT_OK });
    }
    let names: Vec<String> = if args.names.is_empty() {
        fixtures::names().iter().map(|s| s.to_string()).collect()
    } else {
        args.names.clone()
    };
    let cfg = opts.config();
    let mut text = String::new();
    let mut reports = Vec::new();
    let mut code = EXIT_OK;
    for n in &names {
        let r = fixtures::run_fixture(n, &cfg)?;
        if r.passed() {
            text += &format!("PASS {n} ({} entries)\n", r.outcomes.len());
        } else {
            code = EXIT_PROPERTY;
            text += &format!("FAIL {n}\n");
            for m in r.mismatches() {
                text += &format!("  {m}\n");
            }
        }
        reports.push(r);
    }
    Ok(Outcome { results: json!({"fixtures": reports}), text, code })
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let cfg = cli.opts.config();
    match &cli.command {
        Command::Scale => with_problem(
            &cli.opts,
            |p, n, s| scale_on(&p.universe, &p.endo, n, s, &cfg),
            |p, n, s| scale_on(&p.universe, &p.endo, n, s, &cfg),
        ),
        Command::Tidy => with_problem(
            &cli.opts,
            |p, n, s| tidy_on(&p.universe, &p.endo, n, s, &cfg),
            |p, n, s| tidy_on(&p.universe, &p.endo, n, s, &cfg),
        ),
        Command::Check(a) => cmd_check(&cli.opts, a),
        Command::Examples(a) => cmd_examples(&cli.opts, a),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Scale => "scale",
        Command::Tidy => "tidy",
        Command::Check(_) => "check",
        Command::Examples(_) => "examples",
    }
}

/// Runs the command line `args` (including the program name), writing the
/// report to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let started = Instant::now();
    let digest = cli.opts.input.as_ref().and_then(|_| read_input(&cli.opts).ok()).map(|(_, d)| d);
    let (results, text, code) = match dispatch(&cli) {
        Ok(o) => (o.results, o.text, o.code),
        Err(err) => {
            let code = exit_code_for(&err);
            let msg = format!("{err:#}");
            (json!({"error": msg}), format!("error: {msg}\n"), code)
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let elapsed = started.elapsed();
    if cli.opts.json {
        let mut report = json!({
            "command": command_name(&cli.command),
            "args": echo,
            "inputs_digest": digest,
            "config": cli.opts.config(),
            "results": results,
            "exit_code": code,
        });
        if cli.opts.timing {
            report["timing_ms"] = json!(elapsed.as_secs_f64() * 1e3);
        }
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report).unwrap_or_default());
    } else {
        let _ = write!(out, "{text}");
        if cli.opts.timing {
            let _ = writeln!(out, "time: {:.3} s", elapsed.as_secs_f64());
        }
    }
    code
}
