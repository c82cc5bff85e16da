use std::collections::BTreeSet;
use std::str::FromStr;

use super::state::{CdclState, ResolutionChain};
use super::types::{Lit, PropProblem, Var};
use crate::logic::ClauseId;

/// Picks the next decision literal among unassigned variables.
pub trait DecisionHeuristic {
    fn choose(&mut self, state: &CdclState) -> Option<Lit>;
}

/// Lowest unassigned variable index with a fixed polarity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Heuristic {
    #[default]
    LowestIndexNegative,
    LowestIndexPositive,
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lowest-negative" => Ok(Heuristic::LowestIndexNegative),
            "lowest-positive" => Ok(Heuristic::LowestIndexPositive),
            _ => Err(format!(
                "unknown heuristic '{s}' (expected lowest-negative or lowest-positive)"
            )),
        }
    }
}

impl DecisionHeuristic for Heuristic {
    fn choose(&mut self, state: &CdclState) -> Option<Lit> {
        let positive = matches!(self, Heuristic::LowestIndexPositive);
        (0..state.num_vars() as u32)
            .map(Var)
            .find(|&v| state.value_of(v).is_none())
            .map(|v| Lit::new(v, positive))
    }
}

/// Steps of a run, in the order they happen.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Event {
    Decide { lit: Lit, level: u32 },
    Propagate { lit: Lit, clause: ClauseId },
    Conflict { clause: ClauseId },
    Learn { clause: Vec<Lit>, backjump: i64 },
}

impl Event {
    /// Text trace line, e.g. `learn P∨Q backjump 1`.
    pub fn render(&self, names: &[String]) -> String {
        use super::types::{render_clause, render_lit};
        match self {
            Event::Decide { lit, level } => format!("decide {} @{level}", render_lit(names, *lit)),
            Event::Propagate { lit, clause } => {
                format!("propagate {} <- clause {clause}", render_lit(names, *lit))
            }
            Event::Conflict { clause } => format!("conflict clause {clause}"),
            Event::Learn { clause, backjump } => {
                format!("learn {} backjump {backjump}", render_clause(names, clause))
            }
        }
    }
}

/// Receives every event of a run. `Decide` and `Learn` are reported with
/// the state before the step is applied; `Propagate` and `Conflict` after
/// the propagation round that produced them.
pub trait SolveObserver {
    fn on_event(&mut self, state: &CdclState, event: &Event);
}

impl SolveObserver for () {
    fn on_event(&mut self, _: &CdclState, _: &Event) {}
}

/// Collects events into a vector.
#[derive(Default, Debug)]
pub struct EventLog(pub Vec<Event>);

impl SolveObserver for EventLog {
    fn on_event(&mut self, _: &CdclState, event: &Event) {
        self.0.push(event.clone());
    }
}

impl<F: FnMut(&CdclState, &Event)> SolveObserver for F {
    fn on_event(&mut self, state: &CdclState, event: &Event) {
        self(state, event)
    }
}

/// One learned clause with the resolution chain that derives it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LearnedStep {
    /// Id in U; `None` for ⊥.
    pub id: Option<ClauseId>,
    pub clause: Vec<Lit>,
    pub chain: ResolutionChain,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SolveResult {
    /// Total assignment, indexed by variable.
    Sat(Vec<bool>),
    /// Learned clauses in order, the last one ⊥.
    Unsat(Vec<LearnedStep>),
    /// The state's trail limit stopped propagation.
    LimitReached,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SolveStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

/// Runs propagate → (conflict ? analyze + backjump : complete ? Sat : decide)
/// until a verdict, returning it with the final state.
pub fn solve_state(
    mut state: CdclState,
    heuristic: &mut dyn DecisionHeuristic,
    observer: &mut dyn SolveObserver,
) -> (SolveResult, CdclState, SolveStats) {
    let mut proof = Vec::new();
    let mut stats = SolveStats::default();
    loop {
        let report = state.propagate();
        stats.propagations += report.propagated.len() as u64;
        for &(lit, clause) in &report.propagated {
            observer.on_event(&state, &Event::Propagate { lit, clause });
        }
        if let Some(clause) = report.conflict {
            stats.conflicts += 1;
            observer.on_event(&state, &Event::Conflict { clause });
            let analysis = state.analyze_conflict().expect("conflict is set");
            observer.on_event(
                &state,
                &Event::Learn {
                    clause: analysis.learned.clone(),
                    backjump: analysis.backjump_level,
                },
            );
            if analysis.learned.is_empty() {
                state.set_bottom();
                proof.push(LearnedStep {
                    id: None,
                    clause: Vec::new(),
                    chain: analysis.chain,
                });
                return (SolveResult::Unsat(proof), state, stats);
            }
            let id = state
                .backjump_and_learn(&analysis.learned, analysis.backjump_level)
                .expect("first-UIP clause is asserting");
            proof.push(LearnedStep {
                id: Some(id),
                clause: analysis.learned,
                chain: analysis.chain,
            });
            continue;
        }
        if report.limit_hit {
            return (SolveResult::LimitReached, state, stats);
        }
        if state.is_complete() {
            let model = (0..state.num_vars() as u32)
                .map(|v| state.value_of(Var(v)).expect("complete"))
                .collect();
            return (SolveResult::Sat(model), state, stats);
        }
        let lit = heuristic
            .choose(&state)
            .expect("an unassigned variable exists");
        observer.on_event(
            &state,
            &Event::Decide {
                lit,
                level: state.level() + 1,
            },
        );
        state.decide(lit).expect("decision at fixpoint");
        stats.decisions += 1;
    }
}

pub fn solve(problem: &PropProblem, heuristic: Heuristic) -> SolveResult {
    let mut h = heuristic;
    solve_state(CdclState::new(problem), &mut h, &mut ()).0
}

/// True if `model` satisfies every clause of `problem`.
pub fn satisfies(problem: &PropProblem, model: &[bool]) -> bool {
    problem.clauses.iter().all(|c| {
        c.lits
            .iter()
            .any(|l| model[l.var().index()] == l.is_positive())
    })
}

/// Replays every chain of an Unsat proof by plain set-based resolution and
/// checks that each step's pivot is complementary, each result matches the
/// recorded clause, and the last clause is ⊥.
pub fn check_refutation(problem: &PropProblem, proof: &[LearnedStep]) -> bool {
    let mut known: Vec<(ClauseId, BTreeSet<Lit>)> = problem
        .clauses
        .iter()
        .map(|c| (c.id, c.lits.iter().copied().collect()))
        .collect();
    let lookup = |known: &Vec<(ClauseId, BTreeSet<Lit>)>, id: ClauseId| {
        known.iter().find(|(i, _)| *i == id).map(|(_, c)| c.clone())
    };
    for step in proof {
        let Some(mut cur) = lookup(&known, step.chain.start) else {
            return false;
        };
        for &(pivot, with) in &step.chain.steps {
            let Some(other) = lookup(&known, with) else {
                return false;
            };
            let (p, n) = (Lit::new(pivot, true), Lit::new(pivot, false));
            let (a, b) = if cur.contains(&p) && other.contains(&n) {
                (p, n)
            } else if cur.contains(&n) && other.contains(&p) {
                (n, p)
            } else {
                return false;
            };
            cur.remove(&a);
            cur.extend(other.into_iter().filter(|&l| l != b));
        }
        let recorded: BTreeSet<Lit> = step.clause.iter().copied().collect();
        if cur != recorded {
            return false;
        }
        if let Some(id) = step.id {
            known.push((id, cur));
        }
    }
    proof.last().is_some_and(|s| s.clause.is_empty())
}
