use std::collections::BTreeMap;
use std::fmt;

use super::subsume::condense;
use crate::logic::{
    is_maximal_in, rename_apart, unify, Clause, ClauseId, OrderingConfig, OrderingError,
    Substitution,
};

/// Literal selection policy. A selected literal is always negative.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum SelectionStrategy {
    #[default]
    None,
    /// Select the first negative literal of every clause that has one.
    FirstNegative,
    /// Explicit 0-based positions per clause id; unlisted clauses and
    /// positions of positive literals select nothing.
    Custom(BTreeMap<ClauseId, usize>),
}

impl SelectionStrategy {
    pub fn selected(&self, c: &Clause) -> Option<usize> {
        match self {
            SelectionStrategy::None => None,
            SelectionStrategy::FirstNegative => c.literals.iter().position(|l| !l.positive),
            SelectionStrategy::Custom(map) => map
                .get(&c.id)
                .copied()
                .filter(|&i| c.literals.get(i).is_some_and(|l| !l.positive)),
        }
    }
}

impl std::str::FromStr for SelectionStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(SelectionStrategy::None),
            "first-negative" => Ok(SelectionStrategy::FirstNegative),
            _ => Err(format!(
                "unknown selection '{s}' (expected none or first-negative)"
            )),
        }
    }
}

/// How a clause came about. Literal positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Input,
    Resolution {
        left: ClauseId,
        left_pos: usize,
        right: ClauseId,
        right_pos: usize,
        unifier: Substitution,
    },
    Factoring {
        parent: ClauseId,
        kept: usize,
        merged: usize,
        unifier: Substitution,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedClause {
    pub clause: Clause,
    pub rule: Rule,
}

impl DerivedClause {
    pub fn input(clause: Clause) -> DerivedClause {
        DerivedClause {
            clause,
            rule: Rule::Input,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Input => f.write_str("Input"),
            Rule::Resolution {
                left,
                left_pos,
                right,
                right_pos,
                ..
            } => write!(f, "Res {left}.{} {right}.{}", left_pos + 1, right_pos + 1),
            Rule::Factoring {
                parent,
                kept,
                merged,
                ..
            } => write!(f, "Fac {parent}.{},{}", kept + 1, merged + 1),
        }
    }
}

/// Proof-log line: `<id> : <clause>  [<rule>]`.
impl fmt::Display for DerivedClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}  [{}]", self.clause.id, self.clause, self.rule)
    }
}

/// Binary resolution of `c1` at literal `i` with `c2` at literal `j`,
/// ignoring ordering and selection. The conclusion keeps the remaining
/// literals of `c1` then of `c2`, merges repeated literals and renames
/// variables to `x1, x2, ...`. Returns `None` unless the two literals have
/// opposite signs and unifiable atoms.
pub fn resolve_at(c1: &Clause, i: usize, c2: &Clause, j: usize) -> Option<(Clause, Substitution)> {
    let (a, b) = rename_apart(c1, c2);
    let (l1, l2) = (a.literals.get(i)?, b.literals.get(j)?);
    if l1.positive == l2.positive {
        return None;
    }
    let sigma = unify(&l1.atom, &l2.atom)?;
    let lits = a
        .literals
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .chain(b.literals.iter().enumerate().filter(|&(k, _)| k != j))
        .map(|(_, l)| sigma.apply_literal(l))
        .collect();
    let conclusion = Clause::new(0, lits).dedup_literals().normalize_variables();
    Some((conclusion, sigma))
}

/// Factoring of `c` merging literal `merged` into literal `kept`.
pub fn factor_at(c: &Clause, kept: usize, merged: usize) -> Option<(Clause, Substitution)> {
    let (l1, l2) = (c.literals.get(kept)?, c.literals.get(merged)?);
    if kept == merged || l1.positive != l2.positive {
        return None;
    }
    let sigma = unify(&l1.atom, &l2.atom)?;
    let lits = c
        .literals
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != merged)
        .map(|(_, l)| sigma.apply_literal(l))
        .collect();
    Some((
        Clause::new(0, lits).dedup_literals().normalize_variables(),
        sigma,
    ))
}

/// Eligibility of literal `pos` of `c` after applying `sigma`.
fn eligible(
    c: &Clause,
    pos: usize,
    sigma: &Substitution,
    cfg: &OrderingConfig,
    sel: &SelectionStrategy,
) -> Result<bool, OrderingError> {
    let lit = &c.literals[pos];
    match sel.selected(c) {
        Some(s) => Ok(!lit.positive && s == pos),
        None => {
            let inst = sigma.apply_clause(c);
            is_maximal_in(&inst.literals[pos], &inst, cfg)
        }
    }
}

/// All ordered resolvents of `c1` and `c2`: the positive literal must be
/// maximal in its instantiated premise, which has no selected literal; the
/// negative literal must be selected, or maximal when its premise selects
/// nothing. Results are recorded with `c1` as the left premise.
pub fn ordered_resolve(
    c1: &Clause,
    c2: &Clause,
    cfg: &OrderingConfig,
    sel: &SelectionStrategy,
) -> Result<Vec<DerivedClause>, OrderingError> {
    let (a, b) = rename_apart(c1, c2);
    let mut out: Vec<DerivedClause> = Vec::new();
    for i in 0..a.len() {
        for j in 0..b.len() {
            let (l1, l2) = (&a.literals[i], &b.literals[j]);
            if l1.positive == l2.positive {
                continue;
            }
            let Some(sigma) = unify(&l1.atom, &l2.atom) else {
                continue;
            };
            if !eligible(&a, i, &sigma, cfg, sel)? || !eligible(&b, j, &sigma, cfg, sel)? {
                continue;
            }
            let (conclusion, unifier) = resolve_at(c1, i, c2, j).expect("unifiable pair");
            let d = DerivedClause {
                clause: conclusion,
                rule: Rule::Resolution {
                    left: c1.id,
                    left_pos: i,
                    right: c2.id,
                    right_pos: j,
                    unifier,
                },
            };
            if !out.iter().any(|o| o.clause == d.clause) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Positive factoring: for unifiable positive literals `L_i, L_j` where
/// `σ(L_i)` is maximal in `σ(c)`, conclude `σ(c)` without `L_j`.
/// Selection is the caller's concern: clauses with a selected literal are
/// not factored during saturation.
pub fn factor(c: &Clause, cfg: &OrderingConfig) -> Result<Vec<DerivedClause>, OrderingError> {
    let mut out: Vec<DerivedClause> = Vec::new();
    for i in 0..c.len() {
        for j in 0..c.len() {
            if i == j || !c.literals[i].positive || !c.literals[j].positive {
                continue;
            }
            let Some(sigma) = unify(&c.literals[i].atom, &c.literals[j].atom) else {
                continue;
            };
            if !eligible(c, i, &sigma, cfg, &SelectionStrategy::None)? {
                continue;
            }
            let (conclusion, unifier) = factor_at(c, i, j).expect("unifiable pair");
            if conclusion.len() == c.len() || out.iter().any(|o| o.clause == conclusion) {
                continue;
            }
            out.push(DerivedClause {
                clause: conclusion,
                rule: Rule::Factoring {
                    parent: c.id,
                    kept: i,
                    merged: j,
                    unifier,
                },
            });
        }
    }
    Ok(out)
}

/// Re-applies the recorded rule to the premises found by `lookup`.
/// Returns true if it reproduces the recorded clause literally, either as
/// is or after condensation.
pub fn replays<'a>(d: &DerivedClause, lookup: impl Fn(ClauseId) -> Option<&'a Clause>) -> bool {
    let again = match &d.rule {
        Rule::Input => return true,
        Rule::Resolution {
            left,
            left_pos,
            right,
            right_pos,
            ..
        } => match (lookup(*left), lookup(*right)) {
            (Some(l), Some(r)) => resolve_at(l, *left_pos, r, *right_pos),
            _ => None,
        },
        Rule::Factoring {
            parent,
            kept,
            merged,
            ..
        } => lookup(*parent).and_then(|p| factor_at(p, *kept, *merged)),
    };
    again.is_some_and(|(c, _)| {
        c.literals == d.clause.literals
            || condense(c).normalize_variables().literals == d.clause.literals
    })
}
