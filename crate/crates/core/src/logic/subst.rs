use std::collections::BTreeMap;
use std::fmt;

use super::term::{Atom, Clause, Literal, Term};

/// A finite map from variables to terms, kept idempotent: no bound
/// variable occurs in the range, and there is no binding `x -> x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Substitution {
    bindings: BTreeMap<Term, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, var: &Term) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Term, &Term)> {
        self.bindings.iter()
    }

    /// Inserts a binding without normalizing. Used for renamings, where
    /// domain and range are disjoint by construction.
    pub(crate) fn bind_raw(&mut self, var: Term, to: Term) {
        debug_assert!(var.is_var());
        if var != to {
            self.bindings.insert(var, to);
        }
    }

    /// Adds `var -> to` and keeps the substitution idempotent. `var` must be
    /// unbound and `to` must already be fully applied.
    pub fn bind(&mut self, var: Term, to: Term) {
        debug_assert!(var.is_var());
        debug_assert!(!self.bindings.contains_key(&var));
        if var == to {
            return;
        }
        for t in self.bindings.values_mut() {
            if *t == var {
                *t = to.clone();
            }
        }
        self.bindings.insert(var, to);
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => self.bindings.get(t).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom {
            predicate: a.predicate.clone(),
            args: a.args.iter().map(|t| self.apply_term(t)).collect(),
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            positive: l.positive,
            atom: self.apply_atom(&l.atom),
        }
    }

    /// Applies the substitution to every literal, preserving order and id.
    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause {
            id: c.id,
            literals: c.literals.iter().map(|l| self.apply_literal(l)).collect(),
        }
    }

    /// `self` followed by `other`: `(other ∘ self)(x) = other(self(x))`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.bindings {
            out.bind_raw(v.clone(), other.apply_term(t));
        }
        for (v, t) in &other.bindings {
            if !self.bindings.contains_key(v) {
                out.bind_raw(v.clone(), t.clone());
            }
        }
        out
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of two atoms, or `None` on predicate, arity or
/// constant clash.
pub fn unify(a: &Atom, b: &Atom) -> Option<Substitution> {
    let mut sigma = Substitution::new();
    if unify_into(a, b, &mut sigma) {
        Some(sigma)
    } else {
        None
    }
}

/// Extends `sigma` to a unifier of `a` and `b`. On failure `sigma` is left
/// in an unspecified state.
pub fn unify_into(a: &Atom, b: &Atom, sigma: &mut Substitution) -> bool {
    if a.predicate != b.predicate || a.args.len() != b.args.len() {
        return false;
    }
    for (s, t) in a.args.iter().zip(&b.args) {
        let s = sigma.apply_term(s);
        let t = sigma.apply_term(t);
        if s == t {
            continue;
        }
        match (&s, &t) {
            (Term::Var(_), _) => sigma.bind(s, t),
            (_, Term::Var(_)) => sigma.bind(t, s),
            _ => return false,
        }
    }
    true
}

/// One-sided matching: extends `sigma` so that `sigma(pattern) = target`,
/// binding only variables of `pattern`. `target` is treated as rigid.
pub fn match_atom(pattern: &Atom, target: &Atom, sigma: &mut Substitution) -> bool {
    if pattern.predicate != target.predicate || pattern.args.len() != target.args.len() {
        return false;
    }
    for (p, t) in pattern.args.iter().zip(&target.args) {
        match p {
            Term::Var(_) => match sigma.get(p) {
                Some(bound) => {
                    if bound != t {
                        return false;
                    }
                }
                None => {
                    sigma.bindings.insert(p.clone(), t.clone());
                }
            },
            Term::Const(_) => {
                if p != t {
                    return false;
                }
            }
        }
    }
    true
}

/// Returns variants of `c1` and `c2` that share no variables. Variables of
/// `c2` that clash with `c1` get primed names.
pub fn rename_apart(c1: &Clause, c2: &Clause) -> (Clause, Clause) {
    let taken: Vec<Term> = c1.variables();
    let own: Vec<Term> = c2.variables();
    if own.iter().all(|v| !taken.contains(v)) {
        return (c1.clone(), c2.clone());
    }
    let mut used: Vec<Term> = taken.iter().chain(own.iter()).cloned().collect();
    let mut sigma = Substitution::new();
    for v in own.iter().filter(|v| taken.contains(v)) {
        let mut name = format!("{}'", v.name());
        while used.contains(&Term::var(&name)) {
            name.push('\'');
        }
        let fresh = Term::var(&name);
        used.push(fresh.clone());
        sigma.bind_raw(v.clone(), fresh);
    }
    (c1.clone(), sigma.apply_clause(c2))
}
