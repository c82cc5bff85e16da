use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Identifier prefixes that mark a variable in the clause text format.
pub const VARIABLE_PREFIXES: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

/// Returns true if `name` denotes a variable under the naming convention.
pub fn is_variable_name(name: &str) -> bool {
    name.starts_with(VARIABLE_PREFIXES)
}

/// A function-free first-order term.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Arc<str>),
    Const(Arc<str>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(Arc::from(name))
    }

    /// Builds a term from an identifier using the variable naming convention.
    pub fn from_ident(name: &str) -> Term {
        if is_variable_name(name) {
            Term::var(name)
        } else {
            Term::constant(name)
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        !self.is_var()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub predicate: Arc<str>,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Atom {
        Atom {
            predicate: Arc::from(predicate),
            args,
        }
    }

    /// A 0-ary atom, i.e. a propositional variable.
    pub fn prop(name: &str) -> Atom {
        Atom::new(name, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Term> {
        self.args.iter().filter(|t| t.is_var())
    }

    /// Ordering used for ground propagation candidates: predicate name,
    /// then arguments position by position under constant name order.
    pub fn lex_cmp(&self, other: &Atom) -> std::cmp::Ordering {
        self.predicate.cmp(&other.predicate).then_with(|| {
            self.args
                .iter()
                .map(Term::name)
                .cmp(other.args.iter().map(Term::name))
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal {
            positive: true,
            atom,
        }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal {
            positive: false,
            atom,
        }
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }

    pub fn is_complement_of(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("¬")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// Problem-unique clause number.
pub type ClauseId = u32;

/// A clause: a multiset of literals kept in textual order. The empty
/// clause is ⊥.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    pub id: ClauseId,
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(id: ClauseId, literals: Vec<Literal>) -> Clause {
        Clause { id, literals }
    }

    pub fn empty(id: ClauseId) -> Clause {
        Clause::new(id, Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    /// True if the clause contains a complementary pair.
    pub fn is_tautology(&self) -> bool {
        self.literals
            .iter()
            .enumerate()
            .any(|(i, l)| self.literals[i + 1..].iter().any(|m| l.is_complement_of(m)))
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Term> {
        let mut seen = Vec::new();
        for t in self.literals.iter().flat_map(|l| l.atom.variables()) {
            if !seen.contains(t) {
                seen.push(t.clone());
            }
        }
        seen
    }

    pub fn constants(&self) -> BTreeSet<Term> {
        self.literals
            .iter()
            .flat_map(|l| l.atom.args.iter())
            .filter(|t| t.is_ground())
            .cloned()
            .collect()
    }

    /// Removes repeated occurrences of identical literals, keeping the first.
    pub fn dedup_literals(mut self) -> Clause {
        let mut out: Vec<Literal> = Vec::with_capacity(self.literals.len());
        for l in self.literals.drain(..) {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        self.literals = out;
        self
    }

    /// Renames variables to `x1, x2, ...` in order of first occurrence.
    pub fn normalize_variables(&self) -> Clause {
        let vars = self.variables();
        let mut sigma = crate::logic::Substitution::new();
        for (i, v) in vars.iter().enumerate() {
            sigma.bind_raw(v.clone(), Term::var(&format!("x{}", i + 1)));
        }
        sigma.apply_clause(self)
    }

    /// Literal multiset in a canonical order, for comparisons that ignore
    /// literal order.
    pub fn sorted_literals(&self) -> Vec<Literal> {
        let mut lits = self.literals.clone();
        lits.sort();
        lits
    }

    /// True if the two clauses are equal up to variable renaming and
    /// literal order.
    pub fn is_variant_of(&self, other: &Clause) -> bool {
        self.len() == other.len()
            && crate::resolution::subsumes(self, other)
            && crate::resolution::subsumes(other, self)
            && self.variables().len() == other.variables().len()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("⊥");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
