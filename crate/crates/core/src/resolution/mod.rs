//! Ordered resolution with selection for function-free clauses.

mod replay;
mod rules;
mod saturate;
mod subsume;

pub use replay::{parse_script, print_script, replay, ReplayError, ReplayStep};
pub use rules::{
    factor, factor_at, ordered_resolve, replays, resolve_at, DerivedClause, Rule, SelectionStrategy,
};
pub use saturate::{saturate, Counters, Limits, Outcome, SaturationResult};
pub use subsume::{condense, subsumes};
