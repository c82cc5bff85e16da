//! Ground-literal trail engine for function-free clause sets and the
//! n-bit counter family.

mod counter;
mod engine;

pub use counter::{counter_problem, CounterProblem};
pub use engine::{
    scl_run, GroundTrailEntry, SclConfig, SclError, SclEvent, SclOutcome, SclRun, SclState,
    SclStats, Source,
};
