use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use super::scalar::{add, mul, sub, Scalar};
use super::system::{Bound, BoundKind, Bounds, LiaSystem, LinIneq};
use super::LiaError;

/// Why a bound is on the trail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    Decision,
    /// 1-based inequation id.
    Ineq(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundEntry<T> {
    pub bound: Bound<T>,
    pub level: u32,
    pub reason: Reason,
}

/// Trace line, e.g. `bound y >= 6 <- ineq 1`.
impl<T: Scalar> fmt::Display for BoundEntry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason {
            Reason::Decision => write!(f, "bound {} <- decision", self.bound),
            Reason::Ineq(id) => write!(f, "bound {} <- ineq {id}", self.bound),
        }
    }
}

/// Inequations over variable indices, shared by propagation and search.
#[derive(Clone, Debug)]
pub(crate) struct Compiled<T> {
    pub vars: Vec<String>,
    pub rows: Vec<(Vec<(usize, T)>, T)>,
}

#[derive(Clone, Debug)]
pub(crate) struct Interval<T> {
    pub lo: Vec<Option<T>>,
    pub hi: Vec<Option<T>>,
}

impl<T: Scalar> Compiled<T> {
    pub fn new<'a>(
        ineqs: &[LinIneq<T>],
        extra_vars: impl IntoIterator<Item = &'a str>,
    ) -> Compiled<T> {
        let mut names: Vec<String> = ineqs
            .iter()
            .flat_map(|q| q.variables().map(str::to_string))
            .chain(extra_vars.into_iter().map(str::to_string))
            .collect();
        names.sort();
        names.dedup();
        let index = |v: &str| {
            names
                .binary_search_by(|n| n.as_str().cmp(v))
                .expect("collected")
        };
        let rows = ineqs
            .iter()
            .map(|q| {
                let row = q
                    .coeffs()
                    .iter()
                    .map(|(v, a)| (index(v), a.clone()))
                    .collect();
                (row, q.constant().clone())
            })
            .collect();
        Compiled { vars: names, rows }
    }

    pub fn index_of(&self, var: &str) -> Option<usize> {
        self.vars.binary_search_by(|n| n.as_str().cmp(var)).ok()
    }

    pub fn empty_interval(&self) -> Interval<T> {
        Interval {
            lo: vec![None; self.vars.len()],
            hi: vec![None; self.vars.len()],
        }
    }

    /// Smallest value of `aᵢxᵢ` over the interval of `xᵢ`.
    fn term_min(a: &T, k: usize, iv: &Interval<T>) -> Result<Option<T>, LiaError> {
        let b = if a.is_positive() {
            &iv.lo[k]
        } else {
            &iv.hi[k]
        };
        b.as_ref().map(|x| mul(a, x)).transpose()
    }

    /// Minimum of the left-hand side of row `r`, if all needed bounds exist.
    pub fn row_min(&self, r: usize, iv: &Interval<T>) -> Result<Option<T>, LiaError> {
        let (row, c) = &self.rows[r];
        let mut s = c.clone();
        for (k, a) in row {
            match Self::term_min(a, *k, iv)? {
                Some(t) => s = add(&s, &t)?,
                None => return Ok(None),
            }
        }
        Ok(Some(s))
    }

    /// Bound on the `j`-th variable of row `r` entailed by the row and the
    /// intervals of the other variables, if it is tighter than the current
    /// one.
    pub fn implied(
        &self,
        r: usize,
        j: usize,
        iv: &Interval<T>,
    ) -> Result<Option<(usize, BoundKind, T)>, LiaError> {
        let (row, c) = &self.rows[r];
        let (x, a) = &row[j];
        // a·x ≤ −c − Σ_{i≠j} min(aᵢxᵢ) = rest
        let mut rest = sub(&T::zero(), c)?;
        for (i, (k, ai)) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            match Self::term_min(ai, *k, iv)? {
                Some(t) => rest = sub(&rest, &t)?,
                None => return Ok(None),
            }
        }
        let (kind, value) = if a.is_positive() {
            (BoundKind::Upper, rest.div_floor(a))
        } else {
            (BoundKind::Lower, Integer::div_ceil(&rest, a))
        };
        let tighter = match kind {
            BoundKind::Upper => iv.hi[*x].as_ref().is_none_or(|h| value < *h),
            BoundKind::Lower => iv.lo[*x].as_ref().is_none_or(|l| value > *l),
        };
        Ok(tighter.then_some((*x, kind, value)))
    }

    /// First row whose left-hand side has a positive minimum.
    pub fn violated_row(&self, iv: &Interval<T>) -> Result<Option<usize>, LiaError> {
        for r in 0..self.rows.len() {
            if self.row_min(r, iv)?.is_some_and(|m| m.is_positive()) {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    pub fn set(iv: &mut Interval<T>, k: usize, kind: BoundKind, v: T) {
        match kind {
            BoundKind::Upper => iv.hi[k] = Some(v),
            BoundKind::Lower => iv.lo[k] = Some(v),
        }
    }
}

/// Result of one round-robin propagation pass.
pub(crate) enum Pass {
    Fixpoint,
    Conflict(usize),
    /// The budget ran out with a tightening still pending.
    Budget,
}

/// Round-robin over (row, variable) pairs until no pair tightens. Each
/// tightening is passed to `on_step` and counted against `budget`.
pub(crate) fn run_pairs<T: Scalar>(
    sys: &Compiled<T>,
    iv: &mut Interval<T>,
    budget: u64,
    steps: &mut u64,
    mut on_step: impl FnMut(usize, usize, BoundKind, &T),
) -> Result<Pass, LiaError> {
    if let Some(r) = sys.violated_row(iv)? {
        return Ok(Pass::Conflict(r));
    }
    let pairs: Vec<(usize, usize)> = sys
        .rows
        .iter()
        .enumerate()
        .flat_map(|(r, (row, _))| (0..row.len()).map(move |j| (r, j)))
        .collect();
    let mut idle = 0;
    let mut next = 0;
    while idle < pairs.len() {
        let (r, j) = pairs[next];
        next = (next + 1) % pairs.len();
        let Some((k, kind, v)) = sys.implied(r, j, iv)? else {
            idle += 1;
            continue;
        };
        if *steps >= budget {
            return Ok(Pass::Budget);
        }
        *steps += 1;
        idle = 0;
        on_step(r, k, kind, &v);
        Compiled::set(iv, k, kind, v);
        if let Some(r) = sys.violated_row(iv)? {
            return Ok(Pass::Conflict(r));
        }
    }
    Ok(Pass::Fixpoint)
}

/// The tightest bound on `var` that `ineq` entails under `bounds`, or `None`
/// if a needed bound is missing or the result is not tighter than the
/// current bound.
pub fn implied_bound<T: Scalar>(
    ineq: &LinIneq<T>,
    bounds: &Bounds<T>,
    var: &str,
) -> Result<Option<Bound<T>>, LiaError> {
    let sys = Compiled::new(std::slice::from_ref(ineq), []);
    let mut iv = sys.empty_interval();
    for (k, v) in sys.vars.iter().enumerate() {
        iv.lo[k] = bounds.lower.get(v).cloned();
        iv.hi[k] = bounds.upper.get(v).cloned();
    }
    let Some(j) = sys.rows[0].0.iter().position(|(k, _)| sys.vars[*k] == var) else {
        return Ok(None);
    };
    Ok(sys.implied(0, j, &iv)?.map(|(_, kind, value)| Bound {
        var: var.to_string(),
        kind,
        value,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropagationOutcome {
    Fixpoint,
    /// 1-based id of an inequation whose left side has a positive minimum.
    Conflict(usize),
    /// Decision `i` (0-based) contradicts an earlier decision.
    DecisionClash(usize),
    /// The step budget ran out with a tightening still available.
    Diverged,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Propagation<T> {
    pub outcome: PropagationOutcome,
    pub trail: Vec<BoundEntry<T>>,
    /// Number of propagated tightenings.
    pub steps: u64,
    pub bounds: Bounds<T>,
}

/// Applies the decisions, one level each, then propagates round-robin over
/// (inequation, variable) pairs in input order. At most `max_steps`
/// tightenings are made.
pub fn propagate_bounds<T: Scalar>(
    sys: &LiaSystem<T>,
    decisions: &[Bound<T>],
    max_steps: u64,
) -> Result<Propagation<T>, LiaError> {
    let comp = Compiled::new(sys.ineqs(), decisions.iter().map(|d| d.var.as_str()));
    let mut iv = comp.empty_interval();
    let mut trail = Vec::new();
    let finish = |outcome, trail, steps, iv: &Interval<T>| {
        let mut bounds = Bounds::default();
        for (k, v) in comp.vars.iter().enumerate() {
            if let Some(l) = &iv.lo[k] {
                bounds.lower.insert(v.clone(), l.clone());
            }
            if let Some(h) = &iv.hi[k] {
                bounds.upper.insert(v.clone(), h.clone());
            }
        }
        Propagation {
            outcome,
            trail,
            steps,
            bounds,
        }
    };
    for (i, d) in decisions.iter().enumerate() {
        let k = comp.index_of(&d.var).expect("collected");
        let keep = match d.kind {
            BoundKind::Upper => iv.hi[k].as_ref().is_none_or(|h| d.value < *h),
            BoundKind::Lower => iv.lo[k].as_ref().is_none_or(|l| d.value > *l),
        };
        if keep {
            Compiled::set(&mut iv, k, d.kind, d.value.clone());
        }
        trail.push(BoundEntry {
            bound: d.clone(),
            level: i as u32 + 1,
            reason: Reason::Decision,
        });
        if matches!((&iv.lo[k], &iv.hi[k]), (Some(l), Some(h)) if l > h) {
            return Ok(finish(PropagationOutcome::DecisionClash(i), trail, 0, &iv));
        }
    }
    let level = decisions.len() as u32;
    let mut steps = 0;
    let pass = run_pairs(&comp, &mut iv, max_steps, &mut steps, |r, k, kind, v| {
        trail.push(BoundEntry {
            bound: Bound {
                var: comp.vars[k].clone(),
                kind,
                value: v.clone(),
            },
            level,
            reason: Reason::Ineq(r + 1),
        })
    })?;
    let outcome = match pass {
        Pass::Fixpoint => PropagationOutcome::Fixpoint,
        Pass::Conflict(r) => PropagationOutcome::Conflict(r + 1),
        Pass::Budget => PropagationOutcome::Diverged,
    };
    Ok(finish(outcome, trail, steps, &iv))
}

/// Current value box as a map, for callers that want names.
pub fn bounds_map<T: Scalar>(b: &Bounds<T>) -> BTreeMap<String, (Option<T>, Option<T>)> {
    let mut out: BTreeMap<String, (Option<T>, Option<T>)> = BTreeMap::new();
    for (v, l) in &b.lower {
        out.entry(v.clone()).or_default().0 = Some(l.clone());
    }
    for (v, h) in &b.upper {
        out.entry(v.clone()).or_default().1 = Some(h.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lia::syntax::{parse_ineq_line, parse_lia};

    fn q(s: &str) -> LinIneq<i64> {
        parse_ineq_line(s, 1).unwrap()
    }

    #[test]
    fn implied_bound_examples() {
        let b = Bounds::from_bounds(&[Bound::lower("x", 5)]);
        assert_eq!(
            implied_bound(&q("x - y <= 0"), &b, "y").unwrap(),
            Some(Bound::lower("y", 5))
        );
        let b = Bounds::from_bounds(&[Bound::lower("y", 5)]);
        assert_eq!(
            implied_bound(&q("y - x + 1 <= 0"), &b, "x").unwrap(),
            Some(Bound::lower("x", 6))
        );
        let b = Bounds::from_bounds(&[Bound::lower("y", 1)]);
        assert_eq!(
            implied_bound(&q("2x + 3y - 1 <= 0"), &b, "x").unwrap(),
            Some(Bound::upper("x", -1))
        );
    }

    #[test]
    fn implied_bound_needs_opposite_bounds() {
        let b = Bounds::from_bounds(&[Bound::upper("x", 5)]);
        assert_eq!(implied_bound(&q("x - y <= 0"), &b, "y").unwrap(), None);
        // not tighter than the bound already there
        let b = Bounds::from_bounds(&[Bound::lower("x", 5), Bound::lower("y", 7)]);
        assert_eq!(implied_bound(&q("x - y <= 0"), &b, "y").unwrap(), None);
        assert_eq!(
            implied_bound(&q("x <= 3"), &Bounds::default(), "z").unwrap(),
            None
        );
    }

    /// Exhaustive check of the rounding on [−10,10]².
    #[test]
    fn implied_bound_rounding_matches_search() {
        for (a, b, c) in [(2, 3, -1), (-3, 2, 4), (3, -2, 0), (-2, -5, 7)] {
            let ineq = LinIneq::new([("x".to_string(), a), ("y".to_string(), b)], c).unwrap();
            for ylo in -3..=3 {
                let bounds =
                    Bounds::from_bounds(&[Bound::lower("y", ylo), Bound::upper("y", ylo + 2)]);
                let got = implied_bound(&ineq, &bounds, "x").unwrap().unwrap();
                let xs: Vec<i64> = (-10..=10)
                    .filter(|&x| (ylo..=ylo + 2).any(|y| a * x + b * y + c <= 0))
                    .collect();
                let expect = if a > 0 {
                    *xs.iter().max().unwrap()
                } else {
                    *xs.iter().min().unwrap()
                };
                assert_eq!(got.value, expect, "{ineq} y in [{ylo},{}]", ylo + 2);
            }
        }
    }

    #[test]
    fn crafted_pair_diverges() {
        let sys = parse_lia::<i64>("x - y <= 0\ny - x + 1 <= 0").unwrap();
        let p = propagate_bounds(&sys, &[Bound::lower("x", 0)], 100).unwrap();
        assert_eq!(p.outcome, PropagationOutcome::Diverged);
        assert_eq!(p.steps, 100);
        let lines: Vec<String> = p
            .trail
            .iter()
            .take(4)
            .map(|e| e.bound.to_string())
            .collect();
        assert_eq!(lines, ["x >= 0", "y >= 0", "x >= 1", "y >= 1"]);
        assert_eq!(p.trail[1].to_string(), "bound y >= 0 <- ineq 1");
        assert_eq!(p.trail[2].to_string(), "bound x >= 1 <- ineq 2");
    }

    #[test]
    fn single_propagation_fixpoint() {
        let sys = parse_lia::<i64>("x - y <= 0").unwrap();
        let p = propagate_bounds(&sys, &[Bound::lower("x", 5)], 100).unwrap();
        assert_eq!(p.outcome, PropagationOutcome::Fixpoint);
        assert_eq!(p.bounds.lower.get("y"), Some(&5));
        assert_eq!(p.steps, 1);
    }

    #[test]
    fn direct_contradiction() {
        let sys = parse_lia::<i64>("x <= 0\n-x + 1 <= 0").unwrap();
        let p = propagate_bounds(&sys, &[], 100).unwrap();
        assert!(matches!(p.outcome, PropagationOutcome::Conflict(_)));
    }

    #[test]
    fn zero_budget() {
        let sys = parse_lia::<i64>("x - y <= 0\ny - x + 1 <= 0").unwrap();
        let p = propagate_bounds(&sys, &[], 0).unwrap();
        assert_eq!(p.outcome, PropagationOutcome::Fixpoint);
        let sys = parse_lia::<i64>("x <= 0").unwrap();
        assert_eq!(
            propagate_bounds(&sys, &[], 0).unwrap().outcome,
            PropagationOutcome::Diverged
        );
    }

    #[test]
    fn decisions_clash() {
        let sys = parse_lia::<i64>("x - y <= 0").unwrap();
        let p = propagate_bounds(&sys, &[Bound::lower("x", 3), Bound::upper("x", 2)], 10).unwrap();
        assert_eq!(p.outcome, PropagationOutcome::DecisionClash(1));
        assert_eq!(p.trail[1].level, 2);
    }

    #[test]
    fn decision_conflict_is_detected_before_propagation() {
        let sys = parse_lia::<i64>("x <= 0").unwrap();
        let p = propagate_bounds(&sys, &[Bound::lower("x", 1)], 10).unwrap();
        assert_eq!((p.outcome, p.steps), (PropagationOutcome::Conflict(1), 0));
    }

    #[test]
    fn overflow_surfaces() {
        let sys = parse_lia::<i64>("9000000000000000000*x - y <= 0").unwrap();
        let r = propagate_bounds(&sys, &[Bound::lower("x", 4)], 10);
        assert_eq!(r.unwrap_err(), LiaError::Overflow);
        let sys = parse_lia::<num_bigint::BigInt>("9000000000000000000*x - y <= 0").unwrap();
        let p = propagate_bounds(&sys, &[Bound::lower("x", 4.into())], 10).unwrap();
        assert_eq!(p.outcome, PropagationOutcome::Fixpoint);
    }

    #[test]
    fn bounds_map_merges() {
        let b = Bounds::from_bounds(&[
            Bound::<i64>::lower("x", 1),
            Bound::upper("x", 4),
            Bound::upper("y", 0),
        ]);
        let m = bounds_map(&b);
        assert_eq!(m["x"], (Some(1), Some(4)));
        assert_eq!(m["y"], (None, Some(0)));
    }
}
