use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::logic::{Atom, Clause, ClauseId};

/// Propositional variable, 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A propositional literal packed as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    pub fn pos(var: u32) -> Lit {
        Lit::new(Var(var), true)
    }

    pub fn neg(var: u32) -> Lit {
        Lit::new(Var(var), false)
    }

    pub fn var(self) -> Var {
        Var(self.0 / 2)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    /// DIMACS encoding: 1-based, negative for negated literals.
    pub fn to_dimacs(self) -> i64 {
        let v = self.var().0 as i64 + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn from_dimacs(x: i64) -> Lit {
        debug_assert!(x != 0);
        Lit::new(Var((x.unsigned_abs() - 1) as u32), x > 0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PropClause {
    pub id: ClauseId,
    pub lits: Vec<Lit>,
}

impl PropClause {
    pub fn new(id: ClauseId, lits: Vec<Lit>) -> PropClause {
        PropClause { id, lits }
    }
}

/// A propositional clause set with display names for its variables.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PropProblem {
    pub names: Vec<String>,
    pub clauses: Vec<PropClause>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("clause {clause} is not propositional: atom {atom} has arguments")]
pub struct NotPropositional {
    pub clause: ClauseId,
    pub atom: String,
}

impl PropProblem {
    /// Problem over `num_vars` variables named `x1..xn`.
    pub fn with_vars(num_vars: usize) -> PropProblem {
        PropProblem {
            names: (1..=num_vars).map(|i| format!("x{i}")).collect(),
            clauses: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    /// Appends a clause with the next sequential id.
    pub fn add_clause(&mut self, lits: Vec<Lit>) -> ClauseId {
        let id = self.clauses.last().map_or(1, |c| c.id + 1);
        self.clauses.push(PropClause::new(id, lits));
        id
    }

    /// Converts 0-ary clauses; variables are numbered by first occurrence.
    pub fn from_clauses(clauses: &[Clause]) -> Result<PropProblem, NotPropositional> {
        let mut index: HashMap<Atom, u32> = HashMap::new();
        let mut p = PropProblem::default();
        for c in clauses {
            let mut lits = Vec::with_capacity(c.len());
            for l in &c.literals {
                if l.atom.arity() > 0 {
                    return Err(NotPropositional {
                        clause: c.id,
                        atom: l.atom.to_string(),
                    });
                }
                let v = *index.entry(l.atom.clone()).or_insert_with(|| {
                    p.names.push(l.atom.predicate.to_string());
                    (p.names.len() - 1) as u32
                });
                lits.push(Lit::new(Var(v), l.positive));
            }
            p.clauses.push(PropClause::new(c.id, lits));
        }
        Ok(p)
    }

    pub fn lit_name(&self, l: Lit) -> String {
        render_lit(&self.names, l)
    }
}

pub(crate) fn render_lit(names: &[String], l: Lit) -> String {
    let name = names
        .get(l.var().index())
        .cloned()
        .unwrap_or_else(|| format!("x{}", l.var().0 + 1));
    if l.is_positive() {
        name
    } else {
        format!("¬{name}")
    }
}

/// Renders a clause as `P∨¬Q`, or `⊥` when empty.
pub fn render_clause(names: &[String], lits: &[Lit]) -> String {
    if lits.is_empty() {
        return "⊥".to_string();
    }
    lits.iter()
        .map(|&l| render_lit(names, l))
        .collect::<Vec<_>>()
        .join("∨")
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}
