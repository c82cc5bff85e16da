use crate::logic::{match_atom, Clause, Literal, Substitution};

/// True iff some substitution maps `c1` onto a sub-multiset of `c2`.
/// Each literal of `c2` can be used by at most one literal of `c1`.
pub fn subsumes(c1: &Clause, c2: &Clause) -> bool {
    if c1.len() > c2.len() {
        return false;
    }
    let mut used = vec![false; c2.len()];
    search(
        &c1.literals,
        &c2.literals,
        &mut used,
        true,
        &Substitution::new(),
    )
}

/// Drops literals while some substitution maps the clause into the rest,
/// giving an equivalent clause with no such redundant literal.
pub fn condense(c: Clause) -> Clause {
    let mut c = c;
    'outer: loop {
        for i in 0..c.literals.len() {
            let mut rest = c.literals.clone();
            rest.remove(i);
            let mut used = vec![false; rest.len()];
            if search(&c.literals, &rest, &mut used, false, &Substitution::new()) {
                c.literals = rest;
                continue 'outer;
            }
        }
        return c;
    }
}

fn search(
    rest: &[Literal],
    target: &[Literal],
    used: &mut [bool],
    exclusive: bool,
    sigma: &Substitution,
) -> bool {
    let Some((first, rest)) = rest.split_first() else {
        return true;
    };
    for (j, t) in target.iter().enumerate() {
        if (exclusive && used[j]) || t.positive != first.positive {
            continue;
        }
        let mut s = sigma.clone();
        if match_atom(&first.atom, &t.atom, &mut s) {
            used[j] = true;
            if search(rest, target, used, exclusive, &s) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}
