//! Iterative routing and scheduling heuristic with arc-cost modification.

mod costs;
mod fingerprint;
mod run;

pub use costs::{compositions, modify_costs, realized_cost, Compositions, CostHistory, CostMode, CostUpdate, Scenario};
pub use fingerprint::fingerprint;
pub use run::{run, DecompositionConfig, DecompositionOutcome, IterationLog, IterationRecord, Scheduler};
