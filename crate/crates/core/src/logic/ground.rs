use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::subst::Substitution;
use super::term::{Clause, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundingError {
    #[error("grounding domain is empty")]
    EmptyDomain,
    #[error("clause {clause} has {count} ground instances, above the cap of {cap}")]
    TooManyInstances {
        clause: u32,
        count: u128,
        cap: usize,
    },
}

/// Number of instances before deduplication: `|domain|^(#distinct vars)`.
pub fn instance_count(c: &Clause, domain_size: usize) -> u128 {
    (domain_size as u128).saturating_pow(c.variables().len() as u32)
}

/// All ground instances of `c` over `domain` together with their grounding
/// substitutions, in odometer order (first variable slowest, domain in
/// ascending order). Instances with equal literal multisets are kept once.
pub fn ground_instances_with_subst(
    c: &Clause,
    domain: &BTreeSet<Term>,
    cap: usize,
) -> Result<Vec<(Clause, Substitution)>, GroundingError> {
    if domain.is_empty() {
        return Err(GroundingError::EmptyDomain);
    }
    let vars = c.variables();
    let count = instance_count(c, domain.len());
    if count > cap as u128 {
        return Err(GroundingError::TooManyInstances {
            clause: c.id,
            count,
            cap,
        });
    }
    let consts: Vec<&Term> = domain.iter().collect();
    let mut digits = vec![0usize; vars.len()];
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    loop {
        let mut sigma = Substitution::new();
        for (v, &d) in vars.iter().zip(&digits) {
            sigma.bind_raw(v.clone(), consts[d].clone());
        }
        let inst = sigma.apply_clause(c);
        if seen.insert(inst.sorted_literals()) {
            out.push((inst, sigma));
        }
        // odometer, last variable fastest
        let mut k = vars.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < consts.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

pub fn ground_instances(
    c: &Clause,
    domain: &BTreeSet<Term>,
    cap: usize,
) -> Result<Vec<Clause>, GroundingError> {
    Ok(ground_instances_with_subst(c, domain, cap)?
        .into_iter()
        .map(|(c, _)| c)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::syntax::parse_clause;

    fn bits() -> BTreeSet<Term> {
        [Term::constant("0"), Term::constant("1")]
            .into_iter()
            .collect()
    }

    #[test]
    fn two_instances() {
        let c = parse_clause("-P(x1,0) | P(x1,1)").unwrap();
        let got: Vec<String> = ground_instances(&c, &bits(), 100)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, vec!["¬P(0,0) ∨ P(0,1)", "¬P(1,0) ∨ P(1,1)"]);
    }

    #[test]
    fn ground_clause_is_its_own_instance() {
        let c = parse_clause("P(0) | -Q(1)").unwrap();
        assert_eq!(ground_instances(&c, &bits(), 1).unwrap(), vec![c]);
    }

    #[test]
    fn four_variables_give_sixteen() {
        let c = parse_clause("P(x1,x2,x3,x4)").unwrap();
        // enumeration oracle: all 4-bit strings
        let mut expected = BTreeSet::new();
        for n in 0..16u32 {
            let s: Vec<String> = (0..4).rev().map(|b| ((n >> b) & 1).to_string()).collect();
            expected.insert(format!("P({})", s.join(",")));
        }
        let got: BTreeSet<String> = ground_instances(&c, &bits(), 100)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, expected);
        assert_eq!(instance_count(&c, 2), 16);
    }

    #[test]
    fn duplicates_removed() {
        let c = parse_clause("P(x) | P(y)").unwrap();
        assert_eq!(instance_count(&c, 2), 4);
        // {0,0}, {0,1}, {1,1}: P(0)|P(1) and P(1)|P(0) coincide
        assert_eq!(ground_instances(&c, &bits(), 100).unwrap().len(), 3);
    }

    #[test]
    fn cap_and_empty_domain() {
        let c = parse_clause("P(x1,x2,x3,x4)").unwrap();
        assert!(matches!(
            ground_instances(&c, &bits(), 15),
            Err(GroundingError::TooManyInstances { count: 16, .. })
        ));
        assert_eq!(
            ground_instances(&c, &BTreeSet::new(), 15),
            Err(GroundingError::EmptyDomain)
        );
    }
}
