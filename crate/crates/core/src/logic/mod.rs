//! Function-free first-order syntax: terms, atoms, literals and clauses,
//! substitutions and unification, ground instantiation, and the
//! Knuth–Bendix ordering. Propositional logic is the 0-ary special case.

mod ground;
mod kbo;
mod subst;
pub mod syntax;
mod term;

pub use ground::{ground_instances, ground_instances_with_subst, instance_count, GroundingError};
pub use kbo::{
    is_maximal_in, kbo_compare, maximal_literals, maximal_positions, KboOrdering, OrderingConfig,
    OrderingError,
};
pub use subst::{match_atom, rename_apart, unify, unify_into, Substitution};
pub use term::{is_variable_name, Atom, Clause, ClauseId, Literal, Term, VARIABLE_PREFIXES};
