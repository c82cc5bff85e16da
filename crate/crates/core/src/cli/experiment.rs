use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::logic::{OrderingConfig, OrderingError};
use crate::resolution::{saturate, Limits, Outcome, SelectionStrategy};
use crate::scl::{counter_problem, scl_run, SclConfig, SclOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowResult {
    Unsat,
    Sat,
    ResourceExceeded,
}

impl fmt::Display for RowResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowResult::Unsat => "Unsat",
            RowResult::Sat => "Sat",
            RowResult::ResourceExceeded => "ResourceExceeded",
        })
    }
}

/// Both engines on the n-bit counter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub scl_propagations: u64,
    pub scl_result: RowResult,
    pub resolution_generated: u64,
    pub resolution_result: RowResult,
    pub scl_ms: f64,
    pub resolution_ms: f64,
}

impl ExperimentRow {
    pub const HEADER: &'static str =
        "n scl_propagations scl_result resolution_generated resolution_result scl_ms resolution_ms";
}

impl fmt::Display for ExperimentRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {:.3} {:.3}",
            self.n,
            self.scl_propagations,
            self.scl_result,
            self.resolution_generated,
            self.resolution_result,
            self.scl_ms,
            self.resolution_ms
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
}

/// Per-bit inference budget fitted on the rows with `n ≤ 4`, widened by one
/// inference per bit, and the rows that exceed it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Envelope {
    pub coefficient: f64,
    pub exceeded: Vec<usize>,
}

pub fn linear_envelope(report: &ExperimentReport) -> Envelope {
    let coefficient = report
        .rows
        .iter()
        .filter(|r| r.n <= 4)
        .map(|r| r.resolution_generated as f64 / r.n as f64)
        .fold(0.0, f64::max);
    let exceeded = report
        .rows
        .iter()
        .filter(|r| r.resolution_generated as f64 > (coefficient + 1.0) * r.n as f64)
        .map(|r| r.n)
        .collect();
    Envelope {
        coefficient,
        exceeded,
    }
}

fn row(
    n: usize,
    sel: &SelectionStrategy,
    precedence: Option<&str>,
    limits: Limits,
) -> Result<ExperimentRow, OrderingError> {
    let problem = counter_problem(n);
    let t = Instant::now();
    let (scl_propagations, scl_result) =
        match scl_run(&problem.clauses, &BTreeSet::new(), SclConfig::default()) {
            Ok(run) => (
                run.stats.propagations,
                match run.outcome {
                    SclOutcome::Unsat => RowResult::Unsat,
                    SclOutcome::Sat(_) => RowResult::Sat,
                    SclOutcome::ResourceExceeded => RowResult::ResourceExceeded,
                },
            ),
            Err(_) => (0, RowResult::ResourceExceeded),
        };
    let scl_ms = t.elapsed().as_secs_f64() * 1e3;
    let ord = match precedence {
        Some(p) => OrderingConfig::with_precedence(&problem.clauses, p)?,
        None => OrderingConfig::for_clauses(&problem.clauses),
    };
    let t = Instant::now();
    let res = saturate(&problem.clauses, &ord, sel, limits)?;
    let resolution_ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(ExperimentRow {
        n,
        scl_propagations,
        scl_result,
        resolution_generated: res.counters.generated,
        resolution_result: match res.outcome {
            Outcome::Unsat(_) => RowResult::Unsat,
            Outcome::Saturated(_) => RowResult::Sat,
            Outcome::LimitReached => RowResult::ResourceExceeded,
        },
        scl_ms,
        resolution_ms,
    })
}

/// Runs both engines on `counter_problem(n)` for `n = 1..=n_max`, one
/// thread per `n`.
pub fn counter_experiment(
    n_max: usize,
    sel: &SelectionStrategy,
    precedence: Option<&str>,
    limits: Limits,
) -> Result<ExperimentReport, OrderingError> {
    let rows = std::thread::scope(|s| {
        let handles: Vec<_> = (1..=n_max)
            .map(|n| s.spawn(move || row(n, sel, precedence, limits)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("experiment thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(ExperimentReport { rows })
}
