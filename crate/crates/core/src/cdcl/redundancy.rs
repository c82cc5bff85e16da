//! Brute-force redundancy check under the trail-induced clause ordering.
//!
//! Atoms are ranked by trail position, unassigned atoms above all assigned
//! ones (in index order). Within one atom, the literal that is true on the
//! trail is the smaller one; for unassigned atoms the positive literal is
//! smaller. Clauses are compared by the multiset extension.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use thiserror::Error;

use super::state::TrailEntry;
use super::types::{Lit, Var};

/// Largest atom count accepted by [`is_redundant`].
pub const MAX_REDUNDANCY_ATOMS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{atoms} atoms exceed the truth-table cap of {cap}")]
pub struct TooManyAtoms {
    pub atoms: usize,
    pub cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrailOrdering {
    rank: Vec<usize>,
    trail_polarity: Vec<Option<bool>>,
}

impl TrailOrdering {
    pub fn from_trail(trail: &[TrailEntry], num_vars: usize) -> TrailOrdering {
        let mut rank = vec![usize::MAX; num_vars];
        let mut trail_polarity = vec![None; num_vars];
        for (i, e) in trail.iter().enumerate() {
            rank[e.lit.var().index()] = i;
            trail_polarity[e.lit.var().index()] = Some(e.lit.is_positive());
        }
        let mut next = trail.len();
        for r in rank.iter_mut() {
            if *r == usize::MAX {
                *r = next;
                next += 1;
            }
        }
        TrailOrdering {
            rank,
            trail_polarity,
        }
    }

    pub fn atom_rank(&self, v: Var) -> usize {
        self.rank[v.index()]
    }

    /// Sort key; comparing keys gives the literal ordering.
    pub fn literal_key(&self, l: Lit) -> (usize, u8) {
        let v = l.var().index();
        let smaller_polarity = self.trail_polarity[v].unwrap_or(true);
        (self.rank[v], u8::from(l.is_positive() != smaller_polarity))
    }

    /// Multiset extension: compare the literal keys sorted in descending
    /// order lexicographically.
    pub fn compare_clauses(&self, a: &[Lit], b: &[Lit]) -> Ordering {
        let desc = |c: &[Lit]| {
            let mut k: Vec<(usize, u8)> = c.iter().map(|&l| self.literal_key(l)).collect();
            k.sort_unstable_by(|x, y| y.cmp(x));
            k
        };
        desc(a).cmp(&desc(b))
    }
}

/// True iff the clauses of `set` that are strictly smaller than `c` entail
/// `c`, decided by enumerating all assignments that falsify `c`.
pub fn is_redundant<'a>(
    c: &[Lit],
    set: impl IntoIterator<Item = &'a [Lit]>,
    ord: &TrailOrdering,
) -> Result<bool, TooManyAtoms> {
    let smaller: Vec<&[Lit]> = set
        .into_iter()
        .filter(|d| ord.compare_clauses(d, c) == Ordering::Less)
        .collect();
    // tautologies are entailed by anything
    if c.iter().any(|l| c.contains(&l.negate())) {
        return Ok(true);
    }
    let mut index: BTreeMap<Var, usize> = BTreeMap::new();
    for l in c.iter().chain(smaller.iter().flat_map(|d| d.iter())) {
        let n = index.len();
        index.entry(l.var()).or_insert(n);
    }
    if index.len() > MAX_REDUNDANCY_ATOMS {
        return Err(TooManyAtoms {
            atoms: index.len(),
            cap: MAX_REDUNDANCY_ATOMS,
        });
    }
    let masks = |d: &[Lit]| -> (u32, u32) {
        d.iter().fold((0, 0), |(p, n), l| {
            let bit = 1u32 << index[&l.var()];
            if l.is_positive() {
                (p | bit, n)
            } else {
                (p, n | bit)
            }
        })
    };
    let (c_pos, c_neg) = masks(c);
    let fixed = c_pos | c_neg;
    let forced_true = c_neg;
    let clauses: Vec<(u32, u32)> = smaller.iter().map(|d| masks(d)).collect();
    let free: Vec<u32> = (0..index.len() as u32)
        .map(|i| 1u32 << i)
        .filter(|b| fixed & b == 0)
        .collect();
    // enumerate assignments of the free atoms; c's atoms take the values
    // that make c false
    for bits in 0u64..(1u64 << free.len()) {
        let mut a = forced_true;
        for (i, b) in free.iter().enumerate() {
            if bits >> i & 1 == 1 {
                a |= b;
            }
        }
        if clauses.iter().all(|&(p, n)| a & p != 0 || !a & n != 0) {
            // a model of the smaller clauses falsifies c
            return Ok(false);
        }
    }
    Ok(true)
}
