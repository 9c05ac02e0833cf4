//! Solution representation, independent checking, cost and indicators.

mod check;
mod cost;
mod decode;
mod solution;

pub use check::{check, ValidationReport, Violation, ViolationKind, TIME_TOLERANCE};
pub use cost::{indicators, indicators_with_spc, shortest_path_cost, total_cost, Indicators};
pub use decode::{decode_cpf, decode_tif, decode_tsf};
pub use solution::{Platoon, PlatoonSolution, TimedArc, VehicleRoute};
