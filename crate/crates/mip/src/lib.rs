//! Mixed-integer linear programs: a solver-agnostic model, a
//! branch-and-bound solver over LP relaxations, and MPS / LP text export.

pub mod error;
pub mod export;
pub mod lp_format;
pub mod model;
pub mod names;
mod relax;
pub mod solve;

pub use error::{MipError, Result};
pub use export::{export_model, to_lp, to_mps, ExportFormat};
pub use lp_format::read_lp;
pub use model::{Constraint, MipModel, Objective, ObjectiveSense, Sense, VarId, VarKind, Variable};
pub use relax::lp_bound;
pub use solve::{solve, BranchRule, MipConfig, MipResult, MipStatus, NodeOrder};
