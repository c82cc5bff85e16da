//! Linear integer inequations: simple-bound propagation, the a-priori
//! solution box and a complete search inside it.
//!
//! Everything is generic over the integer type; see the aliases at the
//! crate root.

mod decide;
mod propagate;
mod scalar;
mod syntax;
mod system;

use thiserror::Error;

pub use decide::{apriori_bound, apriori_bounds, decide_bounded, DecideConfig, Decision, Verdict};
pub use propagate::{
    bounds_map, implied_bound, propagate_bounds, BoundEntry, Propagation, PropagationOutcome,
    Reason,
};
pub use scalar::Scalar;
pub use syntax::{parse_bound, parse_ineq_line, parse_lia, print_lia};
pub use system::{Bound, BoundKind, Bounds, LiaSystem, LinIneq, Rel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiaError {
    #[error("integer overflow; use a wider scalar type")]
    Overflow,
    #[error("inequation has no variables")]
    NoVariables,
    #[error("search stopped after {nodes} nodes and {steps} tightenings")]
    ResourceExceeded { nodes: u64, steps: u64 },
}
