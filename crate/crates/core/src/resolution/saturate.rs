use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::rules::{factor, ordered_resolve, DerivedClause, Rule, SelectionStrategy};
use super::subsume::{condense, subsumes};
use crate::logic::{Clause, ClauseId, OrderingConfig, OrderingError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Cap on conclusions produced by inferences.
    pub max_generated: u64,
    /// Cap on given-clause iterations.
    pub max_given: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_generated: 100_000,
            max_given: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Conclusions of resolution and factoring inferences.
    pub generated: u64,
    /// Derived clauses that survived deletion and got an id.
    pub kept: u64,
    /// Clauses discarded by forward or backward subsumption.
    pub subsumed: u64,
    /// Tautologies discarded.
    pub tautologies: u64,
    /// Derived clauses shortened by condensation.
    pub condensed: u64,
    pub given: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Every clause the refutation uses, in id order, ending with ⊥.
    Unsat(Vec<DerivedClause>),
    /// The final active set.
    Saturated(Vec<Clause>),
    LimitReached,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationResult {
    pub outcome: Outcome,
    pub counters: Counters,
    /// Every derived clause that got an id, in order.
    pub derivations: Vec<DerivedClause>,
}

impl SaturationResult {
    pub fn is_unsat(&self) -> bool {
        matches!(self.outcome, Outcome::Unsat(_))
    }
}

struct Run<'a> {
    cfg: &'a OrderingConfig,
    sel: &'a SelectionStrategy,
    limits: Limits,
    counters: Counters,
    next_id: ClauseId,
    all: BTreeMap<ClauseId, DerivedClause>,
    derivations: Vec<DerivedClause>,
    active: Vec<Clause>,
    passive: VecDeque<Clause>,
}

enum Step {
    Continue,
    Bottom(ClauseId),
    Limit,
}

impl Run<'_> {
    fn redundant(&self, c: &Clause) -> bool {
        self.active
            .iter()
            .chain(self.passive.iter())
            .any(|d| subsumes(d, c))
    }

    fn admit(&mut self, mut d: DerivedClause) -> Step {
        self.counters.generated += 1;
        if self.counters.generated > self.limits.max_generated {
            return Step::Limit;
        }
        if d.clause.is_tautology() {
            self.counters.tautologies += 1;
            return Step::Continue;
        }
        let len = d.clause.len();
        d.clause = condense(d.clause).normalize_variables();
        if d.clause.len() < len {
            self.counters.condensed += 1;
        }
        if !d.clause.is_empty() && self.redundant(&d.clause) {
            self.counters.subsumed += 1;
            return Step::Continue;
        }
        d.clause.id = self.next_id;
        self.next_id += 1;
        self.counters.kept += 1;
        let id = d.clause.id;
        self.derivations.push(d.clone());
        self.all.insert(id, d.clone());
        if d.clause.is_empty() {
            return Step::Bottom(id);
        }
        self.passive.push_back(d.clause);
        Step::Continue
    }

    fn proof(&self, bottom: ClauseId) -> Vec<DerivedClause> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![bottom];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            match &self.all[&id].rule {
                Rule::Input => {}
                Rule::Resolution { left, right, .. } => stack.extend([*left, *right]),
                Rule::Factoring { parent, .. } => stack.push(*parent),
            }
        }
        seen.into_iter().map(|id| self.all[&id].clone()).collect()
    }

    fn infer(&mut self, given: &Clause) -> Result<Step, OrderingError> {
        let mut conclusions = Vec::new();
        if self.sel.selected(given).is_none() {
            conclusions.extend(factor(given, self.cfg)?);
        }
        for partner in &self.active {
            conclusions.extend(ordered_resolve(given, partner, self.cfg, self.sel)?);
        }
        for d in conclusions {
            match self.admit(d) {
                Step::Continue => {}
                stop => return Ok(stop),
            }
        }
        Ok(Step::Continue)
    }
}

/// Given-clause saturation with a FIFO passive queue, tautology deletion,
/// condensation of conclusions and forward and backward subsumption. Derived clauses are numbered
/// after the largest input id.
pub fn saturate(
    input: &[Clause],
    cfg: &OrderingConfig,
    sel: &SelectionStrategy,
    limits: Limits,
) -> Result<SaturationResult, OrderingError> {
    let mut run = Run {
        cfg,
        sel,
        limits,
        counters: Counters::default(),
        next_id: input.iter().map(|c| c.id).max().unwrap_or(0) + 1,
        all: BTreeMap::new(),
        derivations: Vec::new(),
        active: Vec::new(),
        passive: VecDeque::new(),
    };
    let finish = |run: Run, outcome: Outcome| SaturationResult {
        outcome,
        counters: run.counters,
        derivations: run.derivations,
    };
    for c in input {
        let c = c.clone().dedup_literals();
        run.all.insert(c.id, DerivedClause::input(c.clone()));
        if c.is_empty() {
            let proof = vec![DerivedClause::input(c)];
            return Ok(finish(run, Outcome::Unsat(proof)));
        }
        if c.is_tautology() {
            run.counters.tautologies += 1;
        } else if run.redundant(&c) {
            run.counters.subsumed += 1;
        } else {
            run.passive.push_back(c);
        }
    }
    while let Some(given) = run.passive.pop_front() {
        if run.counters.given >= limits.max_given {
            return Ok(finish(run, Outcome::LimitReached));
        }
        run.counters.given += 1;
        if run.active.iter().any(|d| subsumes(d, &given)) {
            run.counters.subsumed += 1;
            continue;
        }
        let before = run.active.len();
        run.active.retain(|d| !subsumes(&given, d));
        run.counters.subsumed += (before - run.active.len()) as u64;
        run.active.push(given.clone());
        match run.infer(&given)? {
            Step::Continue => {}
            Step::Bottom(id) => {
                let proof = run.proof(id);
                return Ok(finish(run, Outcome::Unsat(proof)));
            }
            Step::Limit => return Ok(finish(run, Outcome::LimitReached)),
        }
    }
    let active = std::mem::take(&mut run.active);
    Ok(finish(run, Outcome::Saturated(active)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::syntax::parse_problem;
    use crate::resolution::rules::replays;
    use crate::scl::counter_problem;

    fn run(text: &str, sel: SelectionStrategy) -> SaturationResult {
        let cs = parse_problem(text).unwrap();
        let cfg = OrderingConfig::for_clauses(&cs);
        saturate(&cs, &cfg, &sel, Limits::default()).unwrap()
    }

    #[test]
    fn unit_conflict() {
        let r = run("P(0).\n-P(0).", SelectionStrategy::None);
        let Outcome::Unsat(proof) = &r.outcome else {
            panic!()
        };
        assert_eq!(r.counters.generated, 1);
        assert_eq!(proof.len(), 3);
        assert!(proof.last().unwrap().clause.is_empty());
    }

    #[test]
    fn satisfiable_counter_generates_nothing() {
        let mut cs = counter_problem(4).clauses;
        cs.pop();
        let cfg = OrderingConfig::for_clauses(&cs);
        let r = saturate(&cs, &cfg, &SelectionStrategy::None, Limits::default()).unwrap();
        assert!(matches!(r.outcome, Outcome::Saturated(ref s) if s.len() == 5));
        assert_eq!(r.counters.generated, 0);
    }

    #[test]
    fn counter_refutation_replays() {
        let cs = counter_problem(3).clauses;
        let cfg = OrderingConfig::for_clauses(&cs);
        let r = saturate(
            &cs,
            &cfg,
            &SelectionStrategy::FirstNegative,
            Limits::default(),
        )
        .unwrap();
        let Outcome::Unsat(proof) = &r.outcome else {
            panic!("{:?}", r.outcome)
        };
        for d in proof {
            assert!(
                replays(d, |id| proof
                    .iter()
                    .find(|p| p.clause.id == id)
                    .map(|p| &p.clause)),
                "{d}"
            );
        }
    }

    #[test]
    fn tautologies_and_subsumed_inputs_are_dropped() {
        let r = run("P(x) | -P(x).\nQ(x).\nQ(0).", SelectionStrategy::None);
        let Outcome::Saturated(s) = r.outcome else {
            panic!()
        };
        assert_eq!(s.len(), 1);
        assert_eq!((r.counters.tautologies, r.counters.subsumed), (1, 1));
    }

    #[test]
    fn backward_subsumption() {
        // Q(0) | R arrives first and is removed once Q(x) is given
        let r = run("Q(0) | R.\nQ(x).", SelectionStrategy::None);
        let Outcome::Saturated(s) = r.outcome else {
            panic!()
        };
        assert_eq!(s.iter().map(|c| c.id).collect::<Vec<_>>(), vec![2]);
        assert_eq!(r.counters.subsumed, 1);
    }

    #[test]
    fn limits_stop_the_loop() {
        let cs = counter_problem(6).clauses;
        let cfg = OrderingConfig::for_clauses(&cs);
        let limits = Limits {
            max_generated: 3,
            max_given: 100,
        };
        let r = saturate(&cs, &cfg, &SelectionStrategy::FirstNegative, limits).unwrap();
        assert_eq!(r.outcome, Outcome::LimitReached);
    }

    #[test]
    fn empty_input_clause() {
        let r = run("P(0).\n⊥.", SelectionStrategy::None);
        assert!(r.is_unsat());
        assert_eq!(r.counters.generated, 0);
    }
}
