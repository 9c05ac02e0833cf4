//! MIP models built from an instance: the two exact formulations, the
//! routing and scheduling subproblems of the decomposition, and the pair
//! matching model.

mod cpf;
mod fcnf;
mod matching;
mod routes;
mod tif;
mod tsf;

pub use cpf::{build_cpf, CpfModel};
pub use fcnf::{build_fcnf, ArcCost, CostTable, FcnfModel};
pub use matching::{build_matching, MatchingModel};
pub use routes::FixedRoutes;
pub use tif::{build_tif, scheduling_preprocess, Preprocessed, TifModel, TifVariant};
pub use tsf::{build_tsf, TsfModel};

use crate::error::Result;
use crate::instance::{node_time_bounds, BoundsMode, Instance, TimeBounds};
use crate::network::{prune_arcs, AdmissibleArcs};
use crate::scalar::Scalar;

/// Whole-graph time bounds and admissible arcs for every vehicle.
pub fn vehicle_data<S: Scalar>(inst: &Instance<S>) -> Result<(Vec<TimeBounds>, Vec<AdmissibleArcs<S>>)> {
    let mut bounds = Vec::with_capacity(inst.num_vehicles());
    let mut adm = Vec::with_capacity(inst.num_vehicles());
    for v in &inst.vehicles {
        bounds.push(node_time_bounds(inst, v.id, BoundsMode::WholeGraph)?);
        adm.push(prune_arcs(&inst.network, v, inst.travel_times(), inst.eta)?);
    }
    Ok((bounds, adm))
}
