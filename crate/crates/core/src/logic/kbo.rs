//! Knuth–Bendix ordering on function-free atoms.
//!
//! An atom `P(t1,..,tn)` is compared as a term headed by its predicate
//! symbol. Literals are compared through their atoms only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::term::{Atom, Clause, Literal, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KboOrdering {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl KboOrdering {
    pub fn reverse(self) -> KboOrdering {
        match self {
            KboOrdering::Greater => KboOrdering::Less,
            KboOrdering::Less => KboOrdering::Greater,
            o => o,
        }
    }
}

impl fmt::Display for KboOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KboOrdering::Greater => "GT",
            KboOrdering::Less => "LT",
            KboOrdering::Equal => "EQ",
            KboOrdering::Incomparable => "INCOMPARABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderingError {
    #[error("symbol '{0}' has no weight or precedence")]
    UnknownSymbol(String),
    #[error("constant '{symbol}' has weight {weight}, below the variable weight {var_weight}")]
    NotAdmissible {
        symbol: String,
        weight: u32,
        var_weight: u32,
    },
    #[error("weights must be positive ('{0}')")]
    ZeroWeight(String),
    #[error("invalid precedence: {0}")]
    BadPrecedence(String),
}

/// KBO parameters: symbol weights, a total precedence and the variable
/// weight. Constants and predicate symbols share one namespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderingConfig {
    weights: BTreeMap<String, u32>,
    /// Rank in the precedence; larger is greater.
    precedence: BTreeMap<String, usize>,
    var_weight: u32,
}

impl OrderingConfig {
    /// Builds a config from explicit weights and a precedence listed from
    /// greatest to smallest.
    pub fn new(
        weights: BTreeMap<String, u32>,
        precedence_desc: &[String],
        var_weight: u32,
    ) -> Result<OrderingConfig, OrderingError> {
        if var_weight == 0 {
            return Err(OrderingError::ZeroWeight("variable".into()));
        }
        let n = precedence_desc.len();
        let mut precedence = BTreeMap::new();
        for (i, s) in precedence_desc.iter().enumerate() {
            if precedence.insert(s.clone(), n - i).is_some() {
                return Err(OrderingError::BadPrecedence(format!("'{s}' listed twice")));
            }
        }
        for (s, &w) in &weights {
            if w == 0 {
                return Err(OrderingError::ZeroWeight(s.clone()));
            }
            if !precedence.contains_key(s) {
                return Err(OrderingError::UnknownSymbol(s.clone()));
            }
        }
        for s in precedence.keys() {
            if !weights.contains_key(s) {
                return Err(OrderingError::UnknownSymbol(s.clone()));
            }
        }
        Ok(OrderingConfig {
            weights,
            precedence,
            var_weight,
        })
    }

    /// Default instance for a clause set: unit weights, constants ordered by
    /// name (so `1 > 0`), all predicate symbols above all constants and
    /// ordered by name among themselves.
    pub fn for_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> OrderingConfig {
        let (preds, consts) = symbols(clauses);
        let desc: Vec<String> = preds
            .iter()
            .rev()
            .chain(consts.iter().rev())
            .cloned()
            .collect();
        let weights = desc.iter().map(|s| (s.clone(), 1)).collect();
        OrderingConfig::new(weights, &desc, 1).expect("default config is admissible")
    }

    /// Default weights with a user precedence such as `P>1>0`. Symbols of
    /// the clause set missing from the list are placed below it using the
    /// default order.
    pub fn with_precedence<'a>(
        clauses: impl IntoIterator<Item = &'a Clause>,
        spec: &str,
    ) -> Result<OrderingConfig, OrderingError> {
        let (preds, consts) = symbols(clauses);
        let mut desc: Vec<String> = Vec::new();
        for s in spec.split('>').map(str::trim) {
            if s.is_empty() {
                return Err(OrderingError::BadPrecedence(format!(
                    "empty symbol in '{spec}'"
                )));
            }
            desc.push(s.to_string());
        }
        for s in preds.iter().rev().chain(consts.iter().rev()) {
            if !desc.contains(s) {
                desc.push(s.clone());
            }
        }
        let weights = desc.iter().map(|s| (s.clone(), 1)).collect();
        OrderingConfig::new(weights, &desc, 1)
    }

    pub fn var_weight(&self) -> u32 {
        self.var_weight
    }

    pub fn weight_of(&self, sym: &str) -> Result<u32, OrderingError> {
        self.weights
            .get(sym)
            .copied()
            .ok_or_else(|| OrderingError::UnknownSymbol(sym.to_string()))
    }

    fn rank(&self, sym: &str) -> Result<usize, OrderingError> {
        self.precedence
            .get(sym)
            .copied()
            .ok_or_else(|| OrderingError::UnknownSymbol(sym.to_string()))
    }

    /// Checks that every constant of the clauses is covered and weighs at
    /// least the variable weight.
    pub fn check_admissible<'a>(
        &self,
        clauses: impl IntoIterator<Item = &'a Clause>,
    ) -> Result<(), OrderingError> {
        let (preds, consts) = symbols(clauses);
        for p in &preds {
            self.rank(p)?;
        }
        for c in &consts {
            self.rank(c)?;
            let w = self.weight_of(c)?;
            if w < self.var_weight {
                return Err(OrderingError::NotAdmissible {
                    symbol: c.clone(),
                    weight: w,
                    var_weight: self.var_weight,
                });
            }
        }
        Ok(())
    }

    /// Precedence listed from greatest to smallest, e.g. `P>1>0`.
    pub fn precedence_string(&self) -> String {
        let mut syms: Vec<(&String, &usize)> = self.precedence.iter().collect();
        syms.sort_by(|a, b| b.1.cmp(a.1));
        syms.iter()
            .map(|(s, _)| s.as_str())
            .collect::<Vec<_>>()
            .join(">")
    }
}

fn symbols<'a>(
    clauses: impl IntoIterator<Item = &'a Clause>,
) -> (BTreeSet<String>, BTreeSet<String>) {
    let mut preds = BTreeSet::new();
    let mut consts = BTreeSet::new();
    for c in clauses {
        for l in &c.literals {
            preds.insert(l.atom.predicate.to_string());
            for t in &l.atom.args {
                if let Term::Const(n) = t {
                    consts.insert(n.to_string());
                }
            }
        }
    }
    (preds, consts)
}

fn term_weight(t: &Term, cfg: &OrderingConfig) -> Result<u64, OrderingError> {
    match t {
        Term::Var(_) => Ok(cfg.var_weight as u64),
        Term::Const(c) => Ok(cfg.weight_of(c)? as u64),
    }
}

/// Argument comparison. Terms are constants or variables, so the only
/// relations are identity, constant-versus-constant by weight then
/// precedence, and incomparability.
fn compare_terms(s: &Term, t: &Term, cfg: &OrderingConfig) -> Result<KboOrdering, OrderingError> {
    if s == t {
        return Ok(KboOrdering::Equal);
    }
    match (s, t) {
        (Term::Const(a), Term::Const(b)) => {
            let (wa, wb) = (cfg.weight_of(a)?, cfg.weight_of(b)?);
            Ok(match wa.cmp(&wb) {
                std::cmp::Ordering::Greater => KboOrdering::Greater,
                std::cmp::Ordering::Less => KboOrdering::Less,
                std::cmp::Ordering::Equal => match cfg.rank(a)?.cmp(&cfg.rank(b)?) {
                    std::cmp::Ordering::Greater => KboOrdering::Greater,
                    std::cmp::Ordering::Less => KboOrdering::Less,
                    std::cmp::Ordering::Equal => KboOrdering::Equal,
                },
            })
        }
        _ => Ok(KboOrdering::Incomparable),
    }
}

/// Compares two atoms: variable condition, total weight, head precedence,
/// then arguments left to right.
pub fn kbo_compare(s: &Atom, t: &Atom, cfg: &OrderingConfig) -> Result<KboOrdering, OrderingError> {
    if s == t {
        // still validate symbols
        cfg.rank(&s.predicate)?;
        for a in &s.args {
            term_weight(a, cfg)?;
        }
        return Ok(KboOrdering::Equal);
    }
    let mut balance: BTreeMap<&Term, i64> = BTreeMap::new();
    let mut ws: u64 = cfg.weight_of(&s.predicate)? as u64;
    let mut wt: u64 = cfg.weight_of(&t.predicate)? as u64;
    for a in &s.args {
        ws += term_weight(a, cfg)?;
        if a.is_var() {
            *balance.entry(a).or_default() += 1;
        }
    }
    for a in &t.args {
        wt += term_weight(a, cfg)?;
        if a.is_var() {
            *balance.entry(a).or_default() -= 1;
        }
    }
    // s may be greater only if every variable occurs in s at least as
    // often as in t, and symmetrically
    let s_may_dominate = balance.values().all(|&b| b >= 0);
    let t_may_dominate = balance.values().all(|&b| b <= 0);

    let candidate = if ws != wt {
        if ws > wt {
            KboOrdering::Greater
        } else {
            KboOrdering::Less
        }
    } else {
        let (ps, pt) = (cfg.rank(&s.predicate)?, cfg.rank(&t.predicate)?);
        if ps != pt {
            if ps > pt {
                KboOrdering::Greater
            } else {
                KboOrdering::Less
            }
        } else {
            let mut lex = KboOrdering::Equal;
            for (a, b) in s.args.iter().zip(&t.args) {
                match compare_terms(a, b, cfg)? {
                    KboOrdering::Equal => continue,
                    o => {
                        lex = o;
                        break;
                    }
                }
            }
            if lex == KboOrdering::Equal && s.args.len() != t.args.len() {
                // same predicate symbol with different arities cannot occur
                // in a well-formed problem
                KboOrdering::Incomparable
            } else {
                lex
            }
        }
    };
    Ok(match candidate {
        KboOrdering::Greater if s_may_dominate => KboOrdering::Greater,
        KboOrdering::Less if t_may_dominate => KboOrdering::Less,
        KboOrdering::Equal => KboOrdering::Equal,
        _ => KboOrdering::Incomparable,
    })
}

/// Literal `l` is maximal in `c` if no literal of `c` has a strictly
/// greater atom.
pub fn is_maximal_in(l: &Literal, c: &Clause, cfg: &OrderingConfig) -> Result<bool, OrderingError> {
    for m in &c.literals {
        if kbo_compare(&m.atom, &l.atom, cfg)? == KboOrdering::Greater {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Positions of the maximal literals of `c`.
pub fn maximal_positions(c: &Clause, cfg: &OrderingConfig) -> Result<Vec<usize>, OrderingError> {
    let mut out = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        if is_maximal_in(l, c, cfg)? {
            out.push(i);
        }
    }
    Ok(out)
}

pub fn maximal_literals(c: &Clause, cfg: &OrderingConfig) -> Result<Vec<Literal>, OrderingError> {
    Ok(maximal_positions(c, cfg)?
        .into_iter()
        .map(|i| c.literals[i].clone())
        .collect())
}
