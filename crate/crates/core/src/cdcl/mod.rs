//! Propositional CDCL over the state `(M, N, U, k, C)`: exhaustive unit
//! propagation with eager conflict detection, first-UIP conflict analysis,
//! learning with backjumping, manual forgetting, and a truth-table check
//! for redundancy of learned clauses under the trail ordering.

pub mod dimacs;
mod redundancy;
mod solve;
mod state;
mod types;

pub use redundancy::{is_redundant, TooManyAtoms, TrailOrdering, MAX_REDUNDANCY_ATOMS};
pub use solve::{
    check_refutation, satisfies, solve, solve_state, DecisionHeuristic, Event, EventLog, Heuristic,
    LearnedStep, SolveObserver, SolveResult, SolveStats,
};
pub use state::{
    Analysis, CdclError, CdclState, ConflictSlot, Justification, PropagationOrder,
    PropagationReport, ResolutionChain, TrailEntry,
};
pub use types::{render_clause, Lit, NotPropositional, PropClause, PropProblem, Var};
