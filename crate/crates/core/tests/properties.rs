mod common;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use workbench::cdcl::{self, dimacs, CdclState, Event, Heuristic, Justification, SolveResult};
use workbench::lia::{self, DecideConfig, PropagationOutcome, Verdict};
use workbench::logic::syntax::{parse_problem, print_problem};
use workbench::logic::OrderingConfig;
use workbench::resolution::{saturate, Limits, Outcome, SelectionStrategy};

use common::*;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every model of `p` also satisfies `clause`.
fn entailed(p: &cdcl::PropProblem, clause: &[cdcl::Lit]) -> bool {
    let n = p.num_vars();
    (0u64..1 << n).all(|bits| {
        let val = |l: &cdcl::Lit| ((bits >> l.var().0) & 1 == 1) == l.is_positive();
        !p.clauses.iter().all(|c| c.lits.iter().any(val)) || clause.iter().any(val)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dimacs_round_trip(seed in any::<u64>()) {
        let p = random_3cnf(&mut rng(seed), 10);
        let text = dimacs::print_dimacs(&p);
        let back = dimacs::parse_dimacs(&text).unwrap();
        prop_assert_eq!(dimacs::print_dimacs(&back), text);
        prop_assert_eq!(back.clauses.len(), p.clauses.len());
    }

    #[test]
    fn bs_round_trip(seed in any::<u64>()) {
        let cs = random_bs(&mut rng(seed));
        prop_assert_eq!(parse_problem(&print_problem(&cs)).unwrap(), cs);
    }

    #[test]
    fn lia_round_trip(seed in any::<u64>()) {
        let sys = random_lia(&mut rng(seed));
        prop_assert_eq!(lia::parse_lia::<i64>(&lia::print_lia(&sys)).unwrap(), sys);
    }

    #[test]
    fn learned_clauses_are_entailed(seed in any::<u64>()) {
        let p = random_3cnf(&mut rng(seed), 9);
        let mut learned = Vec::new();
        let mut observe = |_: &CdclState, e: &Event| {
            if let Event::Learn { clause, .. } = e {
                learned.push(clause.clone());
            }
        };
        cdcl::solve_state(CdclState::new(&p), &mut Heuristic::LowestIndexPositive, &mut observe);
        for c in &learned {
            prop_assert!(entailed(&p, c));
        }
    }

    #[test]
    fn trail_invariants_after_solve(seed in any::<u64>()) {
        let p = random_3cnf(&mut rng(seed), 10);
        let (result, s, _) = cdcl::solve_state(CdclState::new(&p), &mut Heuristic::LowestIndexNegative, &mut ());
        if let SolveResult::Sat(_) = result {
            let trail = s.trail();
            let decisions = trail.iter().filter(|e| e.justification == Justification::Decision).count();
            prop_assert_eq!(decisions as u32, s.level());
            let mut seen = std::collections::BTreeSet::new();
            for e in trail {
                prop_assert!(seen.insert(e.lit.var()));
            }
            prop_assert!(s.is_complete());
        }
    }

    #[test]
    fn saturation_is_sound(seed in any::<u64>(), first_negative in any::<bool>()) {
        let cs = random_bs(&mut rng(seed));
        let sel = if first_negative { SelectionStrategy::FirstNegative } else { SelectionStrategy::None };
        // chains of positive literals can grow without bound, so cap the run
        let limits = Limits { max_generated: 500, max_given: 500 };
        let res = saturate(&cs, &OrderingConfig::for_clauses(&cs), &sel, limits).unwrap();
        match res.outcome {
            Outcome::Unsat(proof) => {
                prop_assert!(!bs_truth_table_sat(&cs));
                prop_assert!(proof.last().unwrap().clause.is_empty());
            }
            Outcome::Saturated(active) => {
                prop_assert!(bs_truth_table_sat(&cs));
                prop_assert!(active.iter().all(|c| !c.is_empty()));
            }
            Outcome::LimitReached => {
                prop_assert!(res.derivations.iter().all(|d| !d.clause.is_empty()));
            }
        }
    }

    #[test]
    fn propagated_bounds_keep_every_solution(seed in any::<u64>()) {
        // bounds can grow geometrically, so propagate without a width limit
        let sys = random_lia(&mut rng(seed));
        let big = lia::parse_lia::<BigInt>(&lia::print_lia(&sys)).unwrap();
        let p = lia::propagate_bounds(&big, &[], 1_000).unwrap();
        let r = 6;
        let vars: Vec<String> = sys.variables().into_iter().map(String::from).collect();
        let size = (2 * r + 1) as usize;
        for idx in 0..size.pow(vars.len() as u32) {
            let point: std::collections::BTreeMap<String, i64> = vars
                .iter()
                .enumerate()
                .map(|(k, v)| (v.clone(), (idx / size.pow(k as u32) % size) as i64 - r))
                .collect();
            if sys.satisfied_by(&point).unwrap() {
                prop_assert!(!matches!(p.outcome, PropagationOutcome::Conflict(_)));
                for e in &p.trail {
                    prop_assert!(e.bound.holds(&BigInt::from(point[&e.bound.var])));
                }
            }
        }
    }

    #[test]
    fn scalar_types_agree(seed in any::<u64>()) {
        let sys = random_lia(&mut rng(seed));
        let text = lia::print_lia(&sys);
        let small = lia::decide_bounded(&sys, DecideConfig::default()).unwrap();
        let big = lia::decide_bounded(&lia::parse_lia::<BigInt>(&text).unwrap(), DecideConfig::default()).unwrap();
        let wide = lia::decide_bounded(&lia::parse_lia::<i128>(&text).unwrap(), DecideConfig::default()).unwrap();
        prop_assert_eq!(matches!(small.verdict, Verdict::Sat(_)), matches!(big.verdict, Verdict::Sat(_)));
        prop_assert_eq!(matches!(small.verdict, Verdict::Sat(_)), matches!(wide.verdict, Verdict::Sat(_)));
        prop_assert_eq!(small.nodes, big.nodes);
    }
}
