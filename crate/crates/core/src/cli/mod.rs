//! Command-line front end: one engine per mode, a text or JSON-lines trace
//! on standard output, and DIMACS-style exit codes.

mod experiment;

use std::collections::BTreeSet;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cdcl::{self, dimacs, CdclState, Event, Heuristic, SolveResult};
use crate::lia::{self, LiaError, PropagationOutcome, Scalar, Verdict};
use crate::logic::syntax::{parse_problem, print_clause};
use crate::logic::{Clause, OrderingConfig};
use crate::resolution::{self, Limits, Outcome, SelectionStrategy};
use crate::scl::{counter_problem, scl_run, SclConfig, SclOutcome};

pub use experiment::{
    counter_experiment, linear_envelope, ExperimentReport, ExperimentRow, RowResult,
};

pub const EXIT_SAT: i32 = 10;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_LIMIT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
/// Largest `--counter-n` accepted by the experiment.
pub const EXPERIMENT_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cdcl,
    Scl,
    Resolution,
    ResolutionReplay,
    LiaPropagate,
    LiaDecide,
    CounterExperiment,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum IntType {
    #[default]
    I64,
    I128,
    Big,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "workbench",
    version,
    about = "CDCL, ground-trail, ordered resolution and bound propagation engines"
)]
pub struct RunConfig {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Input file; `-` reads standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Use the n-bit counter instead of an input file; the largest n for
    /// counter-experiment.
    #[arg(long)]
    pub counter_n: Option<usize>,
    /// none or first-negative.
    #[arg(long, default_value = "first-negative")]
    pub selection: SelectionStrategy,
    /// Symbol precedence from greatest to smallest, e.g. `P>1>0`.
    #[arg(long)]
    pub precedence: Option<String>,
    /// lowest-negative or lowest-positive.
    #[arg(long, default_value = "lowest-negative")]
    pub heuristic: Heuristic,
    /// Inference cap for resolution, tightening cap for the LIA modes.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Cap on ground instances for scl.
    #[arg(long)]
    pub max_instances: Option<usize>,
    /// Replay script for resolution-replay.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    /// Decision bound for lia-propagate, e.g. `x >= 0`; repeatable.
    #[arg(long = "decision")]
    pub decisions: Vec<String>,
    /// Integer type for the LIA modes.
    #[arg(long, value_enum, default_value = "i64")]
    pub int: IntType,
    /// Print every engine step, not just the outcome.
    #[arg(long)]
    pub trace: bool,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Writes trace lines as plain text or as one JSON object per line with
/// the text under `"line"`.
pub struct Emitter<'a> {
    out: &'a mut dyn Write,
    format: Format,
}

impl<'a> Emitter<'a> {
    pub fn new(out: &'a mut dyn Write, format: Format) -> Emitter<'a> {
        Emitter { out, format }
    }

    pub fn line(&mut self, kind: &str, text: impl Into<String>, fields: Value) -> io::Result<()> {
        let text = text.into();
        match self.format {
            Format::Text => writeln!(self.out, "{text}"),
            Format::Json => {
                let mut obj = serde_json::Map::new();
                obj.insert("kind".into(), kind.into());
                if let Value::Object(m) = fields {
                    obj.extend(m);
                }
                obj.insert("line".into(), text.into());
                writeln!(self.out, "{}", Value::Object(obj))
            }
        }
    }
}

/// A failure that ends the run with an exit code and a message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

fn limit(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_LIMIT,
        message: message.into(),
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure {
            code: EXIT_LIMIT,
            message: format!("i/o error: {e}"),
        }
    }
}

/// Runs one configuration, writing the trace to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut em = Emitter::new(out, cfg.format);
    match check(cfg).and_then(|()| dispatch(cfg, &mut em)) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "workbench: {}", f.message);
            f.code
        }
    }
}

fn check(cfg: &RunConfig) -> Result<(), Failure> {
    use Mode::*;
    let m = cfg.mode;
    let reject = |flag: &str| {
        Err(usage(format!(
            "{flag} does not apply to --mode {}",
            mode_name(m)
        )))
    };
    if cfg.replay.is_some() && m != ResolutionReplay {
        return reject("--replay");
    }
    if !cfg.decisions.is_empty() && m != LiaPropagate {
        return reject("--decision");
    }
    if cfg.max_instances.is_some() && m != Scl {
        return reject("--max-instances");
    }
    if cfg.precedence.is_some() && !matches!(m, Resolution | CounterExperiment) {
        return reject("--precedence");
    }
    if cfg.max_steps.is_some() && matches!(m, Cdcl | Scl | ResolutionReplay) {
        return reject("--max-steps");
    }
    if cfg.counter_n.is_some() && matches!(m, Cdcl | LiaPropagate | LiaDecide) {
        return reject("--counter-n");
    }
    if cfg.max_steps == Some(0) && m != LiaPropagate {
        return Err(usage("--max-steps must be positive"));
    }
    if cfg.max_instances == Some(0) || cfg.counter_n == Some(0) {
        return Err(usage("limits and --counter-n must be positive"));
    }
    match m {
        CounterExperiment => {
            if cfg.input.is_some() {
                return reject("--input");
            }
        }
        Scl | Resolution | ResolutionReplay if cfg.counter_n.is_some() => {
            if cfg.input.is_some() {
                return Err(usage("--input and --counter-n are mutually exclusive"));
            }
        }
        _ if cfg.input.is_none() => {
            return Err(usage(format!("--mode {} needs --input", mode_name(m))));
        }
        _ => {}
    }
    if m == ResolutionReplay && cfg.replay.is_none() {
        return Err(usage("--mode resolution-replay needs --replay"));
    }
    Ok(())
}

fn mode_name(m: Mode) -> String {
    m.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn read_file(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn parsed<T>(path: &Path, r: Result<T, crate::ParseError>) -> Result<T, Failure> {
    r.map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Clause set from `--input` or `--counter-n`.
fn clauses(cfg: &RunConfig) -> Result<Vec<Clause>, Failure> {
    if let Some(n) = cfg.counter_n {
        return Ok(counter_problem(n).clauses);
    }
    let path = cfg.input.as_ref().expect("checked");
    parsed(path, parse_problem(&read_file(path)?))
}

fn dispatch(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    match cfg.mode {
        Mode::Cdcl => run_cdcl(cfg, em),
        Mode::Scl => run_scl(cfg, em),
        Mode::Resolution => run_resolution(cfg, em),
        Mode::ResolutionReplay => run_replay(cfg, em),
        Mode::LiaPropagate => match cfg.int {
            IntType::I64 => run_lia_propagate::<i64>(cfg, em),
            IntType::I128 => run_lia_propagate::<i128>(cfg, em),
            IntType::Big => run_lia_propagate::<BigInt>(cfg, em),
        },
        Mode::LiaDecide => match cfg.int {
            IntType::I64 => run_lia_decide::<i64>(cfg, em),
            IntType::I128 => run_lia_decide::<i128>(cfg, em),
            IntType::Big => run_lia_decide::<BigInt>(cfg, em),
        },
        Mode::CounterExperiment => run_experiment(cfg, em),
    }
}

fn run_cdcl(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let path = cfg.input.as_ref().expect("checked");
    let problem = parsed(path, dimacs::parse_dimacs(&read_file(path)?))?;
    let names = problem.names.clone();
    let mut lines: Vec<(Value, String)> = Vec::new();
    let mut observe = |_: &CdclState, e: &Event| {
        let fields = match e {
            Event::Decide { lit, level } => {
                json!({"event": "decide", "lit": lit.to_dimacs(), "level": level})
            }
            Event::Propagate { lit, clause } => {
                json!({"event": "propagate", "lit": lit.to_dimacs(), "clause": clause})
            }
            Event::Conflict { clause } => json!({"event": "conflict", "clause": clause}),
            Event::Learn { clause, backjump } => json!({
                "event": "learn",
                "clause": clause.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>(),
                "backjump": backjump,
            }),
        };
        lines.push((fields, e.render(&names)));
    };
    let mut h = cfg.heuristic;
    let (result, state, stats) = cdcl::solve_state(CdclState::new(&problem), &mut h, &mut observe);
    if cfg.trace {
        for (fields, text) in lines {
            em.line("event", text, fields)?;
        }
    }
    em.line(
        "trail",
        format!("trail {}", state.render_trail()),
        json!({}),
    )?;
    em.line(
        "stats",
        format!(
            "stats decisions={} propagations={} conflicts={}",
            stats.decisions, stats.propagations, stats.conflicts
        ),
        json!({"decisions": stats.decisions, "propagations": stats.propagations, "conflicts": stats.conflicts}),
    )?;
    Ok(match result {
        SolveResult::Sat(model) => {
            em.line("result", "s SATISFIABLE", json!({"result": "sat"}))?;
            let v = dimacs::model_line(&model);
            em.line("model", v, json!({"model": model}))?;
            EXIT_SAT
        }
        SolveResult::Unsat(proof) => {
            em.line(
                "result",
                "s UNSATISFIABLE",
                json!({"result": "unsat", "learned": proof.len()}),
            )?;
            EXIT_UNSAT
        }
        SolveResult::LimitReached => {
            em.line("result", "s UNKNOWN", json!({"result": "limit"}))?;
            EXIT_LIMIT
        }
    })
}

fn run_scl(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let input = clauses(cfg)?;
    let mut scl = SclConfig::default();
    if let Some(k) = cfg.max_instances {
        scl.max_instances = k;
    }
    let run = scl_run(&input, &BTreeSet::new(), scl).map_err(|e| limit(e.to_string()))?;
    if cfg.trace {
        for e in &run.events {
            em.line("event", e.to_string(), json!({}))?;
        }
    }
    let trail: Vec<String> = run.trail.iter().map(|e| e.lit.to_string()).collect();
    em.line(
        "trail",
        format!("trail [{}]", trail.join(" ")),
        json!({"trail": trail}),
    )?;
    if let Some((source, clause)) = &run.last_conflict {
        em.line(
            "conflict",
            format!("conflict {clause} <- {source}"),
            json!({"clause": clause.to_string()}),
        )?;
    }
    em.line(
        "stats",
        run.stats.to_string(),
        serde_json::to_value(run.stats).expect("plain struct"),
    )?;
    Ok(match &run.outcome {
        SclOutcome::Sat(atoms) => {
            let model: Vec<String> = atoms.iter().map(ToString::to_string).collect();
            em.line("result", "Sat", json!({"result": "sat", "model": model}))?;
            EXIT_SAT
        }
        SclOutcome::Unsat => {
            em.line("result", "Unsat", json!({"result": "unsat"}))?;
            EXIT_UNSAT
        }
        SclOutcome::ResourceExceeded => {
            em.line("result", "ResourceExceeded", json!({"result": "limit"}))?;
            EXIT_LIMIT
        }
    })
}

fn ordering(cfg: &RunConfig, input: &[Clause]) -> Result<OrderingConfig, Failure> {
    match &cfg.precedence {
        Some(p) => OrderingConfig::with_precedence(input, p).map_err(|e| usage(e.to_string())),
        None => Ok(OrderingConfig::for_clauses(input)),
    }
}

fn derivation_line(em: &mut Emitter, d: &resolution::DerivedClause) -> io::Result<()> {
    em.line(
        "derived",
        d.to_string(),
        json!({"id": d.clause.id, "clause": print_clause(&d.clause), "rule": d.rule.to_string()}),
    )
}

fn run_resolution(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let input = clauses(cfg)?;
    let ord = ordering(cfg, &input)?;
    let mut limits = Limits::default();
    if let Some(k) = cfg.max_steps {
        limits.max_generated = k;
    }
    let res = resolution::saturate(&input, &ord, &cfg.selection, limits)
        .map_err(|e| usage(e.to_string()))?;
    em.line(
        "ordering",
        format!("precedence {}", ord.precedence_string()),
        json!({}),
    )?;
    if cfg.trace {
        for d in &res.derivations {
            derivation_line(em, d)?;
        }
    }
    let c = res.counters;
    em.line(
        "stats",
        format!(
            "stats generated={} kept={} subsumed={} tautologies={} condensed={} given={}",
            c.generated, c.kept, c.subsumed, c.tautologies, c.condensed, c.given
        ),
        serde_json::to_value(c).expect("plain struct"),
    )?;
    Ok(match res.outcome {
        Outcome::Unsat(proof) => {
            for d in proof
                .iter()
                .filter(|d| !matches!(d.rule, resolution::Rule::Input))
            {
                derivation_line(em, d)?;
            }
            em.line("result", "Unsat", json!({"result": "unsat"}))?;
            EXIT_UNSAT
        }
        Outcome::Saturated(active) => {
            for c in &active {
                em.line(
                    "clause",
                    print_clause(c),
                    json!({"clause": print_clause(c)}),
                )?;
            }
            em.line("result", "Saturated", json!({"result": "saturated"}))?;
            EXIT_SAT
        }
        Outcome::LimitReached => {
            em.line("result", "LimitReached", json!({"result": "limit"}))?;
            EXIT_LIMIT
        }
    })
}

fn run_replay(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let input = clauses(cfg)?;
    let path = cfg.replay.as_ref().expect("checked");
    let script = parsed(path, resolution::parse_script(&read_file(path)?))?;
    let derived = resolution::replay(&input, &script)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    for d in &derived {
        derivation_line(em, d)?;
    }
    if derived.last().is_some_and(|d| d.clause.is_empty()) {
        em.line("result", "Unsat", json!({"result": "unsat"}))?;
        Ok(EXIT_UNSAT)
    } else {
        em.line("result", "Open", json!({"result": "open"}))?;
        Ok(0)
    }
}

fn overflow(e: LiaError) -> Failure {
    match e {
        LiaError::Overflow => limit("integer overflow; rerun with --int i128 or --int big"),
        e => limit(e.to_string()),
    }
}

fn run_lia_propagate<T: Scalar>(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let path = cfg.input.as_ref().expect("checked");
    let sys = parsed(path, lia::parse_lia::<T>(&read_file(path)?))?;
    let decisions = cfg
        .decisions
        .iter()
        .map(|d| lia::parse_bound::<T>(d).map_err(|e| usage(format!("--decision '{d}': {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let budget = cfg.max_steps.unwrap_or(10_000);
    let p = lia::propagate_bounds(&sys, &decisions, budget).map_err(overflow)?;
    for e in &p.trail {
        let reason = match e.reason {
            lia::Reason::Decision => json!("decision"),
            lia::Reason::Ineq(i) => json!(i),
        };
        em.line(
            "bound",
            e.to_string(),
            json!({"var": e.bound.var, "kind": e.bound.kind, "value": e.bound.value.to_string(), "reason": reason}),
        )?;
    }
    em.line(
        "stats",
        format!("stats steps={}", p.steps),
        json!({"steps": p.steps}),
    )?;
    Ok(match p.outcome {
        PropagationOutcome::Fixpoint => {
            em.line("result", "fixpoint", json!({"result": "fixpoint"}))?;
            EXIT_SAT
        }
        PropagationOutcome::Conflict(i) => {
            em.line(
                "result",
                format!("conflict ineq {i}"),
                json!({"result": "conflict", "ineq": i}),
            )?;
            EXIT_UNSAT
        }
        PropagationOutcome::DecisionClash(i) => {
            em.line(
                "result",
                format!("conflict decision {}", i + 1),
                json!({"result": "conflict", "decision": i + 1}),
            )?;
            EXIT_UNSAT
        }
        PropagationOutcome::Diverged => {
            em.line(
                "result",
                format!("diverged after {} steps", p.steps),
                json!({"result": "diverged"}),
            )?;
            EXIT_LIMIT
        }
    })
}

fn run_lia_decide<T: Scalar>(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let path = cfg.input.as_ref().expect("checked");
    let sys = parsed(path, lia::parse_lia::<T>(&read_file(path)?))?;
    let b = lia::apriori_bound(sys.m(), sys.n(), &sys.a().to_big());
    em.line(
        "box",
        format!("box m={} n={} a={} bound={b}", sys.m(), sys.n(), sys.a()),
        json!({"m": sys.m(), "n": sys.n(), "a": sys.a().to_string(), "bound": b.to_string()}),
    )?;
    let mut dc = lia::DecideConfig::default();
    if let Some(k) = cfg.max_steps {
        dc.max_steps = k;
    }
    let d = lia::decide_bounded(&sys, dc).map_err(overflow)?;
    em.line(
        "stats",
        format!("stats nodes={} steps={}", d.nodes, d.steps),
        json!({"nodes": d.nodes, "steps": d.steps}),
    )?;
    Ok(match d.verdict {
        Verdict::Sat(point) => {
            let text: Vec<String> = point.iter().map(|(v, x)| format!("{v}={x}")).collect();
            let obj: serde_json::Map<String, Value> = point
                .iter()
                .map(|(v, x)| (v.clone(), Value::String(x.to_string())))
                .collect();
            em.line(
                "result",
                format!("Sat {}", text.join(" ")),
                json!({"result": "sat", "model": obj}),
            )?;
            EXIT_SAT
        }
        Verdict::Unsat => {
            em.line("result", "Unsat", json!({"result": "unsat"}))?;
            EXIT_UNSAT
        }
    })
}

fn run_experiment(cfg: &RunConfig, em: &mut Emitter) -> Result<i32, Failure> {
    let n_max = cfg.counter_n.unwrap_or(10);
    if n_max > EXPERIMENT_CAP {
        return Err(usage(format!(
            "--counter-n is capped at {EXPERIMENT_CAP} for counter-experiment"
        )));
    }
    let mut limits = Limits::default();
    if let Some(k) = cfg.max_steps {
        limits.max_generated = k;
    }
    let report = counter_experiment(n_max, &cfg.selection, cfg.precedence.as_deref(), limits)
        .map_err(|e| usage(e.to_string()))?;
    em.line("header", ExperimentRow::HEADER, json!({}))?;
    for row in &report.rows {
        em.line(
            "row",
            row.to_string(),
            serde_json::to_value(row).expect("plain struct"),
        )?;
    }
    let env = linear_envelope(&report);
    em.line(
        "envelope",
        format!(
            "envelope {:.2} per bit from n <= 4, exceeded at {:?}",
            env.coefficient, env.exceeded
        ),
        json!({"coefficient": env.coefficient, "exceeded": env.exceeded}),
    )?;
    Ok(0)
}
