//! Ground trail engine for function-free clause sets.
//!
//! The clause set is grounded over a finite domain into a propositional
//! problem whose atoms are numbered in lexicographic order. Propagation
//! always extends the trail with the smallest propagatable atom; decisions
//! pick the smallest undefined atom, positively. Conflicts above level 0
//! are analyzed on the ground abstraction.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::cdcl::{
    solve_state, CdclState, ConflictSlot, Event, Heuristic, Justification, Lit, PropProblem,
    PropagationOrder, SolveResult, Var,
};
use crate::logic::{
    ground_instances_with_subst, Atom, Clause, ClauseId, GroundingError, Literal, Substitution,
    Term,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SclConfig {
    /// Cap on ground instances per clause and on the Herbrand base.
    pub max_instances: usize,
    /// Cap on the trail length.
    pub max_trail: usize,
}

impl Default for SclConfig {
    fn default() -> Self {
        SclConfig {
            max_instances: 1_000_000,
            max_trail: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SclError {
    #[error(transparent)]
    Grounding(#[from] GroundingError),
    #[error("Herbrand base has {count} atoms, above the cap of {cap}")]
    TooManyAtoms { count: u128, cap: usize },
    #[error("trail reached the cap of {cap} entries")]
    ResourceExceeded { cap: usize },
}

/// Why a ground literal is on the trail, or where a conflict comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Decision,
    Instance {
        clause: ClauseId,
        subst: Substitution,
    },
    /// A ground clause learned during the run, by its propositional id.
    Learned(ClauseId),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Decision => f.write_str("decision"),
            Source::Instance { clause, subst } => write!(f, "clause {clause} σ={subst}"),
            Source::Learned(id) => write!(f, "learned {id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundTrailEntry {
    pub lit: Literal,
    pub level: u32,
    pub source: Source,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SclEvent {
    Decide { lit: Literal, level: u32 },
    Propagate { lit: Literal, source: Source },
    Conflict { source: Source, clause: Clause },
    Learn { clause: Clause, backjump: i64 },
}

impl fmt::Display for SclEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SclEvent::Decide { lit, level } => write!(f, "decide {lit} @{level}"),
            SclEvent::Propagate { lit, source } => write!(f, "propagate {lit} <- {source}"),
            SclEvent::Conflict { source, .. } => write!(f, "conflict {source}"),
            SclEvent::Learn { clause, backjump } => write!(f, "learn {clause} backjump {backjump}"),
        }
    }
}

/// Ground abstraction of a clause set.
#[derive(Clone, Debug)]
struct Grounding {
    atoms: Vec<Atom>,
    index: HashMap<Atom, u32>,
    /// Origin of each propositional input clause, indexed by `id - 1`.
    origin: Vec<(ClauseId, Substitution)>,
    problem: PropProblem,
}

fn herbrand_base(
    clauses: &[Clause],
    domain: &BTreeSet<Term>,
    cap: usize,
) -> Result<Vec<Atom>, SclError> {
    let mut signature: BTreeMap<&str, usize> = BTreeMap::new();
    for l in clauses.iter().flat_map(|c| &c.literals) {
        signature.insert(&l.atom.predicate, l.atom.arity());
    }
    let consts: Vec<&Term> = domain.iter().collect();
    let count: u128 = signature
        .values()
        .map(|&k| (consts.len() as u128).saturating_pow(k as u32))
        .sum();
    if count > cap as u128 {
        return Err(SclError::TooManyAtoms { count, cap });
    }
    let mut atoms = Vec::with_capacity(count as usize);
    for (&pred, &arity) in &signature {
        if arity > 0 && consts.is_empty() {
            return Err(GroundingError::EmptyDomain.into());
        }
        let mut digits = vec![0usize; arity];
        loop {
            atoms.push(Atom::new(
                pred,
                digits.iter().map(|&d| consts[d].clone()).collect(),
            ));
            let Some(k) = (0..arity).rev().find(|&k| digits[k] + 1 < consts.len()) else {
                break;
            };
            digits[k] += 1;
            digits[k + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    atoms.sort_by(Atom::lex_cmp);
    Ok(atoms)
}

impl Grounding {
    fn new(clauses: &[Clause], domain: &BTreeSet<Term>, cap: usize) -> Result<Grounding, SclError> {
        let atoms = herbrand_base(clauses, domain, cap)?;
        let index: HashMap<Atom, u32> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i as u32))
            .collect();
        let mut problem = PropProblem {
            names: atoms.iter().map(Atom::to_string).collect(),
            clauses: Vec::new(),
        };
        let mut origin = Vec::new();
        for c in clauses {
            let instances = if c.is_ground() {
                vec![(c.clone(), Substitution::new())]
            } else {
                ground_instances_with_subst(c, domain, cap)?
            };
            for (g, sigma) in instances {
                if g.is_tautology() {
                    continue;
                }
                let lits = g
                    .literals
                    .iter()
                    .map(|l| Lit::new(Var(index[&l.atom]), l.positive))
                    .collect();
                problem.add_clause(lits);
                origin.push((c.id, sigma));
            }
        }
        Ok(Grounding {
            atoms,
            index,
            origin,
            problem,
        })
    }

    fn literal(&self, l: Lit) -> Literal {
        Literal {
            positive: l.is_positive(),
            atom: self.atoms[l.var().index()].clone(),
        }
    }

    fn clause(&self, id: ClauseId, lits: &[Lit]) -> Clause {
        Clause::new(id, lits.iter().map(|&l| self.literal(l)).collect())
    }

    fn source(&self, id: ClauseId) -> Source {
        match self.origin.get(id as usize - 1) {
            Some((clause, subst)) => Source::Instance {
                clause: *clause,
                subst: subst.clone(),
            },
            None => Source::Learned(id),
        }
    }

    fn event(&self, state: &CdclState, e: &Event) -> SclEvent {
        match e {
            Event::Decide { lit, level } => SclEvent::Decide {
                lit: self.literal(*lit),
                level: *level,
            },
            Event::Propagate { lit, clause } => SclEvent::Propagate {
                lit: self.literal(*lit),
                source: self.source(*clause),
            },
            Event::Conflict { clause } => SclEvent::Conflict {
                source: self.source(*clause),
                clause: self.clause(*clause, state.clause(*clause).unwrap_or(&[])),
            },
            Event::Learn { clause, backjump } => SclEvent::Learn {
                clause: self.clause(0, clause),
                backjump: *backjump,
            },
        }
    }
}

/// A clause set grounded over a domain, with its trail state.
#[derive(Clone, Debug)]
pub struct SclState {
    grounding: Grounding,
    cdcl: CdclState,
    max_trail: usize,
}

impl SclState {
    /// Grounds `clauses` over `domain` extended by the constants of the
    /// clauses.
    pub fn new(
        clauses: &[Clause],
        domain: &BTreeSet<Term>,
        cfg: SclConfig,
    ) -> Result<SclState, SclError> {
        let mut domain = domain.clone();
        for c in clauses {
            domain.extend(c.constants());
        }
        let grounding = Grounding::new(clauses, &domain, cfg.max_instances)?;
        let cdcl = CdclState::new(&grounding.problem)
            .with_order(PropagationOrder::SmallestAtom)
            .with_trail_limit(cfg.max_trail);
        Ok(SclState {
            grounding,
            cdcl,
            max_trail: cfg.max_trail,
        })
    }

    /// The Herbrand base in lexicographic order.
    pub fn atoms(&self) -> &[Atom] {
        &self.grounding.atoms
    }

    pub fn num_ground_clauses(&self) -> usize {
        self.grounding.origin.len()
    }

    pub fn level(&self) -> u32 {
        self.cdcl.level()
    }

    /// Exhaustive ground propagation until fixpoint or a false instance.
    pub fn propagate(&mut self) -> Result<Vec<SclEvent>, SclError> {
        let report = self.cdcl.propagate();
        let mut events: Vec<SclEvent> = report
            .propagated
            .iter()
            .map(|&(lit, clause)| {
                self.grounding
                    .event(&self.cdcl, &Event::Propagate { lit, clause })
            })
            .collect();
        if let Some(clause) = report.conflict {
            events.push(
                self.grounding
                    .event(&self.cdcl, &Event::Conflict { clause }),
            );
        } else if report.limit_hit {
            return Err(SclError::ResourceExceeded {
                cap: self.max_trail,
            });
        }
        Ok(events)
    }

    pub fn trail(&self) -> Vec<GroundTrailEntry> {
        self.cdcl
            .trail()
            .iter()
            .map(|e| GroundTrailEntry {
                lit: self.grounding.literal(e.lit),
                level: e.level,
                source: match e.justification {
                    Justification::Decision => Source::Decision,
                    Justification::PropagatedBy(id) => self.grounding.source(id),
                },
            })
            .collect()
    }

    /// The false ground clause in the conflict slot, if any.
    pub fn conflict(&self) -> Option<(Source, Clause)> {
        match self.cdcl.conflict() {
            ConflictSlot::Clause(id) => Some((
                self.grounding.source(id),
                self.grounding
                    .clause(id, self.cdcl.clause(id).unwrap_or(&[])),
            )),
            _ => None,
        }
    }

    /// Truth value of a ground atom on the trail.
    pub fn value(&self, atom: &Atom) -> Option<bool> {
        let v = *self.grounding.index.get(atom)?;
        self.cdcl.value_of(Var(v))
    }

    /// Trail in the form `[P(0)^{C1}, Q^1]`.
    pub fn render_trail(&self) -> String {
        let items: Vec<String> = self
            .trail()
            .iter()
            .map(|e| match &e.source {
                Source::Decision => format!("{}^{}", e.lit, e.level),
                Source::Instance { clause, .. } => format!("{}^{{C{clause}}}", e.lit),
                Source::Learned(id) => format!("{}^{{L{id}}}", e.lit),
            })
            .collect();
        format!("[{}]", items.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SclOutcome {
    /// True atoms of a total Herbrand model, in lexicographic order.
    Sat(Vec<Atom>),
    Unsat,
    ResourceExceeded,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SclStats {
    pub propagations: u64,
    pub decisions: u64,
    pub conflicts: u64,
    pub trail: usize,
}

impl fmt::Display for SclStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stats propagations={} decisions={} trail={}",
            self.propagations, self.decisions, self.trail
        )
    }
}

#[derive(Clone, Debug)]
pub struct SclRun {
    pub outcome: SclOutcome,
    pub stats: SclStats,
    pub events: Vec<SclEvent>,
    /// Trail when the run stopped.
    pub trail: Vec<GroundTrailEntry>,
    /// The last conflict of the run.
    pub last_conflict: Option<(Source, Clause)>,
}

/// Propagates and decides until a total Herbrand model, a level-0
/// conflict, or the trail cap.
pub fn scl_run(
    clauses: &[Clause],
    domain: &BTreeSet<Term>,
    cfg: SclConfig,
) -> Result<SclRun, SclError> {
    let state = SclState::new(clauses, domain, cfg)?;
    let grounding = state.grounding.clone();
    let mut events = Vec::new();
    let mut last_conflict = None;
    let mut observe = |s: &CdclState, e: &Event| {
        let ev = grounding.event(s, e);
        if let SclEvent::Conflict { source, clause } = &ev {
            last_conflict = Some((source.clone(), clause.clone()));
        }
        events.push(ev);
    };
    let (result, cdcl, stats) = solve_state(
        state.cdcl,
        &mut Heuristic::LowestIndexPositive,
        &mut observe,
    );
    let finished = SclState {
        grounding: state.grounding,
        cdcl,
        max_trail: state.max_trail,
    };
    let outcome = match result {
        SolveResult::Sat(model) => SclOutcome::Sat(
            finished
                .grounding
                .atoms
                .iter()
                .zip(model)
                .filter(|(_, b)| *b)
                .map(|(a, _)| a.clone())
                .collect(),
        ),
        SolveResult::Unsat(_) => SclOutcome::Unsat,
        SolveResult::LimitReached => SclOutcome::ResourceExceeded,
    };
    let trail = finished.trail();
    Ok(SclRun {
        outcome,
        stats: SclStats {
            propagations: stats.propagations,
            decisions: stats.decisions,
            conflicts: stats.conflicts,
            trail: trail.len(),
        },
        events,
        trail,
        last_conflict,
    })
}
