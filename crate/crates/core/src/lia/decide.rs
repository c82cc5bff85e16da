use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::propagate::{run_pairs, Compiled, Pass};
use super::scalar::{add, from_big, sub, Scalar};
use super::system::{BoundKind, LiaSystem};
use super::LiaError;

/// `n·(m·a)^(2m+1)`.
pub fn apriori_bound(m: usize, n: usize, a: &BigInt) -> BigInt {
    let base = BigInt::from(m) * a;
    BigInt::from(n) * num_traits::pow(base, 2 * m + 1)
}

/// Every variable mapped to `[−B, B]` with `B = n·(m·a)^(2m+1)`.
pub fn apriori_bounds<T: Scalar>(sys: &LiaSystem<T>) -> BTreeMap<String, (BigInt, BigInt)> {
    let b = apriori_bound(sys.m(), sys.n(), &sys.a().to_big());
    sys.variables()
        .into_iter()
        .map(|v| (v.to_string(), (-b.clone(), b.clone())))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideConfig {
    /// Cap on search nodes.
    pub max_nodes: u64,
    /// Cap on bound tightenings over the whole search.
    pub max_steps: u64,
}

impl Default for DecideConfig {
    fn default() -> Self {
        DecideConfig {
            max_nodes: 1_000_000,
            max_steps: 100_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<T> {
    Sat(BTreeMap<String, T>),
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision<T> {
    pub verdict: Verdict<T>,
    pub nodes: u64,
    pub steps: u64,
}

/// Complete search over the a-priori box. Each node propagates bounds to a
/// fixpoint inside the box, then splits the first open variable into
/// `x = v`, `x ≥ v+1`, `x ≤ v−1`, where `v` is the value of its interval
/// closest to 0. Unsat means no integer point of the box is a solution.
pub fn decide_bounded<T: Scalar>(
    sys: &LiaSystem<T>,
    cfg: DecideConfig,
) -> Result<Decision<T>, LiaError> {
    let comp = Compiled::new(sys.ineqs(), []);
    let bound: T = from_big(&apriori_bound(sys.m(), sys.n(), &sys.a().to_big()))?;
    let neg = sub(&T::zero(), &bound)?;
    let mut root = comp.empty_interval();
    root.lo.iter_mut().for_each(|l| *l = Some(neg.clone()));
    root.hi.iter_mut().for_each(|h| *h = Some(bound.clone()));
    let mut stack = vec![root];
    let (mut nodes, mut steps) = (0u64, 0u64);
    while let Some(mut iv) = stack.pop() {
        nodes += 1;
        if nodes > cfg.max_nodes {
            return Err(LiaError::ResourceExceeded { nodes, steps });
        }
        match run_pairs(&comp, &mut iv, cfg.max_steps, &mut steps, |_, _, _, _| {})? {
            Pass::Conflict(_) => continue,
            Pass::Budget => return Err(LiaError::ResourceExceeded { nodes, steps }),
            Pass::Fixpoint => {}
        }
        if (0..comp.vars.len()).any(|k| iv.lo[k] > iv.hi[k]) {
            continue;
        }
        let Some(k) = (0..comp.vars.len()).find(|&k| iv.lo[k] != iv.hi[k]) else {
            let point: BTreeMap<String, T> = comp
                .vars
                .iter()
                .cloned()
                .zip(iv.lo.iter().map(|l| l.clone().expect("boxed")))
                .collect();
            if sys.satisfied_by(&point)? {
                return Ok(Decision {
                    verdict: Verdict::Sat(point),
                    nodes,
                    steps,
                });
            }
            continue;
        };
        let (lo, hi) = (
            iv.lo[k].clone().expect("boxed"),
            iv.hi[k].clone().expect("boxed"),
        );
        let v = if lo.is_positive() {
            lo.clone()
        } else if hi.is_negative() {
            hi.clone()
        } else {
            T::zero()
        };
        // pushed in reverse so that x = v is explored first
        if v > lo {
            let mut below = iv.clone();
            below.hi[k] = Some(sub(&v, &T::one())?);
            stack.push(below);
        }
        if v < hi {
            let mut above = iv.clone();
            above.lo[k] = Some(add(&v, &T::one())?);
            stack.push(above);
        }
        let mut at = iv;
        Compiled::set(&mut at, k, BoundKind::Lower, v.clone());
        Compiled::set(&mut at, k, BoundKind::Upper, v);
        stack.push(at);
    }
    Ok(Decision {
        verdict: Verdict::Unsat,
        nodes,
        steps,
    })
}
