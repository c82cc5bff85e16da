use crate::logic::{Atom, Clause, Literal, Term};

/// The n-bit counter: `P(0,…,0)`, one carry clause per bit, `¬P(1,…,1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterProblem {
    pub n: usize,
    /// Ids `1..=n+2`.
    pub clauses: Vec<Clause>,
}

impl CounterProblem {
    /// The clause set without the final `¬P(1,…,1)`, which is satisfiable.
    pub fn without_goal(&self) -> Vec<Clause> {
        self.clauses[..self.clauses.len() - 1].to_vec()
    }
}

fn p(args: Vec<Term>) -> Atom {
    Atom::new("P", args)
}

fn bits(b: &str, k: usize) -> impl Iterator<Item = Term> + '_ {
    std::iter::repeat_with(move || Term::constant(b)).take(k)
}

/// Carry clause `i` (1-based, lowest bit first):
/// `¬P(x1..x_{n−i}, 0, 1^{i−1}) ∨ P(x1..x_{n−i}, 1, 0^{i−1})`.
fn carry(n: usize, i: usize) -> Vec<Literal> {
    let prefix: Vec<Term> = (1..=n - i).map(|k| Term::var(&format!("x{k}"))).collect();
    let lhs = prefix
        .iter()
        .cloned()
        .chain(bits("0", 1))
        .chain(bits("1", i - 1))
        .collect();
    let rhs = prefix
        .into_iter()
        .chain(bits("1", 1))
        .chain(bits("0", i - 1))
        .collect();
    vec![Literal::neg(p(lhs)), Literal::pos(p(rhs))]
}

/// # Panics
/// If `n == 0`.
pub fn counter_problem(n: usize) -> CounterProblem {
    assert!(n >= 1, "counter needs at least one bit");
    let mut clauses = vec![Clause::new(
        1,
        vec![Literal::pos(p(bits("0", n).collect()))],
    )];
    for i in 1..=n {
        clauses.push(Clause::new(i as u32 + 1, carry(n, i)));
    }
    clauses.push(Clause::new(
        n as u32 + 2,
        vec![Literal::neg(p(bits("1", n).collect()))],
    ));
    CounterProblem { n, clauses }
}
