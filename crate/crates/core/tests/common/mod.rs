//! Random corpora and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use workbench::cdcl::{Lit, PropProblem};
use workbench::logic::{Atom, Clause, Literal, Term};
use workbench::LiaSystem;

pub fn data(name: &str) -> String {
    let path = format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Random 3-CNF over `3..=max_atoms` atoms with a clause/atom ratio around
/// the satisfiability threshold, so both verdicts are common.
pub fn random_3cnf(rng: &mut impl Rng, max_atoms: usize) -> PropProblem {
    let n = rng.gen_range(3..=max_atoms);
    let m = ((n as f64) * rng.gen_range(3.0..5.5)).round() as usize;
    let mut p = PropProblem::with_vars(n);
    for _ in 0..m {
        let mut vars: Vec<u32> = Vec::new();
        while vars.len() < 3 {
            let v = rng.gen_range(0..n as u32);
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        let lits = vars
            .into_iter()
            .map(|v| {
                if rng.gen_bool(0.5) {
                    Lit::pos(v)
                } else {
                    Lit::neg(v)
                }
            })
            .collect();
        p.add_clause(lits);
    }
    p
}

/// Satisfiability by enumerating every assignment.
pub fn truth_table_sat(p: &PropProblem) -> bool {
    let n = p.num_vars();
    (0u64..1 << n).any(|bits| {
        p.clauses.iter().all(|c| {
            c.lits
                .iter()
                .any(|l| ((bits >> l.var().0) & 1 == 1) == l.is_positive())
        })
    })
}

/// Random clause set over one predicate `P` of arity `1..=3`, constants
/// `0` and `1`, variables `x1..x3`, at most 8 clauses of 1 to 3 literals.
pub fn random_bs(rng: &mut impl Rng) -> Vec<Clause> {
    let arity = rng.gen_range(1..=3);
    let count = rng.gen_range(1..=8);
    (1..=count)
        .map(|id| {
            let len = rng.gen_range(1..=3);
            let lits = (0..len)
                .map(|_| {
                    let args = (0..arity)
                        .map(|_| match rng.gen_range(0..4) {
                            0 => Term::constant("0"),
                            1 => Term::constant("1"),
                            k => Term::var(&format!("x{}", k - 1 + rng.gen_range(0..2))),
                        })
                        .collect();
                    let a = Atom::new("P", args);
                    if rng.gen_bool(0.5) {
                        Literal::pos(a)
                    } else {
                        Literal::neg(a)
                    }
                })
                .collect();
            Clause::new(id, lits)
        })
        .collect()
}

/// Satisfiability of a function-free clause set over the domain {0, 1}:
/// every interpretation of the ground atoms is tried against every ground
/// instance of every clause.
pub fn bs_truth_table_sat(clauses: &[Clause]) -> bool {
    let domain = ["0", "1"];
    let arity = clauses
        .iter()
        .flat_map(|c| c.literals.iter())
        .map(|l| l.atom.args.len())
        .next()
        .unwrap_or(0);
    let atom_index = |args: &[&str]| {
        args.iter()
            .fold(0usize, |acc, a| acc * 2 + usize::from(*a == "1"))
    };
    // every clause instantiated over the domain, as (atom index, sign) lists
    let mut ground: Vec<Vec<(usize, bool)>> = Vec::new();
    for c in clauses {
        let mut vars: Vec<String> = Vec::new();
        for l in &c.literals {
            for t in &l.atom.args {
                if t.is_var() && !vars.iter().any(|v| v == t.name()) {
                    vars.push(t.name().to_string());
                }
            }
        }
        for pick in 0..(1usize << vars.len()) {
            let val: BTreeMap<&str, &str> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.as_str(), domain[(pick >> i) & 1]))
                .collect();
            ground.push(
                c.literals
                    .iter()
                    .map(|l| {
                        let args: Vec<&str> = l
                            .atom
                            .args
                            .iter()
                            .map(|t| if t.is_var() { val[t.name()] } else { t.name() })
                            .collect();
                        (atom_index(&args), l.positive)
                    })
                    .collect(),
            );
        }
    }
    let atoms = 1usize << arity;
    (0u64..1 << atoms).any(|interp| {
        ground
            .iter()
            .all(|c| c.iter().any(|&(a, pos)| ((interp >> a) & 1 == 1) == pos))
    })
}

/// Random system with `m, n ≤ 3` and every coefficient and constant in
/// `[−2, 2]`.
pub fn random_lia(rng: &mut impl Rng) -> LiaSystem {
    let names = ["x", "y", "z"];
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let mut text = String::new();
    for _ in 0..m {
        let mut terms: Vec<String> = Vec::new();
        for v in &names[..n] {
            let a: i64 = rng.gen_range(-2..=2);
            if a != 0 {
                terms.push(format!("{a}*{v}"));
            }
        }
        if terms.is_empty() {
            terms.push(format!(
                "{}*{}",
                [-1, 1][rng.gen_range(0..2)],
                names[rng.gen_range(0..n)]
            ));
        }
        let c: i64 = rng.gen_range(-2..=2);
        text.push_str(&format!("{} + {c} <= 0\n", terms.join(" + ")).replace("+ -", "- "));
    }
    workbench::lia::parse_lia(&text).expect("generated text parses")
}

/// Some integer point of `[−r, r]^n` satisfying the system, by enumeration.
pub fn lia_search(sys: &LiaSystem, r: i64) -> Option<BTreeMap<String, i64>> {
    let vars: Vec<String> = sys.variables().into_iter().map(String::from).collect();
    let mut point = vec![-r; vars.len()];
    loop {
        let ok = sys.ineqs().iter().all(|q| {
            let s: i64 = q
                .coeffs()
                .iter()
                .map(|(v, a)| a * point[vars.iter().position(|w| w == v).unwrap()])
                .sum();
            s + q.constant() <= 0
        });
        if ok {
            return Some(vars.iter().cloned().zip(point.iter().copied()).collect());
        }
        let mut k = 0;
        loop {
            if k == point.len() {
                return None;
            }
            if point[k] < r {
                point[k] += 1;
                break;
            }
            point[k] = -r;
            k += 1;
        }
    }
}

/// True if the two clauses are equal after a bijective renaming of
/// variables, literal order included.
pub fn same_up_to_renaming(a: &Clause, b: &Clause) -> bool {
    if a.literals.len() != b.literals.len() {
        return false;
    }
    let mut fwd: BTreeMap<&str, &str> = BTreeMap::new();
    let mut bwd: BTreeMap<&str, &str> = BTreeMap::new();
    for (x, y) in a.literals.iter().zip(&b.literals) {
        if x.positive != y.positive
            || x.atom.predicate != y.atom.predicate
            || x.atom.args.len() != y.atom.args.len()
        {
            return false;
        }
        for (s, t) in x.atom.args.iter().zip(&y.atom.args) {
            match (s.is_var(), t.is_var()) {
                (true, true) => {
                    if *fwd.entry(s.name()).or_insert(t.name()) != t.name()
                        || *bwd.entry(t.name()).or_insert(s.name()) != s.name()
                    {
                        return false;
                    }
                }
                (false, false) if s.name() == t.name() => {}
                _ => return false,
            }
        }
    }
    true
}
