use crate::error::{Error, Result};
use crate::instance::Vehicle;
use crate::network::{cheapest_costs, cheapest_feasible_path, RoadNetwork, TravelTimeMatrix};
use crate::scalar::Scalar;

/// Arcs a vehicle may use in some optimal plan.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibleArcs<S> {
    pub vehicle: usize,
    pub mask: Vec<bool>,
    pub arcs: Vec<usize>,
    /// Cheapest cost of a path that fits the vehicle's window.
    pub best_cost: S,
    pub best_path: Vec<usize>,
}

impl<S> AdmissibleArcs<S> {
    pub fn contains(&self, arc: usize) -> bool {
        self.mask[arc]
    }
}

/// Keeps arc `(i, j)` when some path through it is both time-feasible and no
/// costlier than `1 / (1 - eta)` times the cheapest time-feasible path. Any
/// vehicle on a costlier path pays more than driving that cheapest path
/// alone, since a platoon member still pays `(1 - eta)` of every arc.
///
/// Arcs entering the origin or leaving the destination are never kept.
pub fn prune_arcs<S: Scalar>(
    net: &RoadNetwork<S>,
    vehicle: &Vehicle,
    st: &TravelTimeMatrix,
    eta: S,
) -> Result<AdmissibleArcs<S>> {
    let (o, d) = (vehicle.origin, vehicle.dest);
    let budget = vehicle.budget();
    let empty = || Error::EmptyPathSet { vehicle: vehicle.id };
    if st.get(o, d).is_none_or(|t| t > budget) {
        return Err(empty());
    }
    let usable = |k: usize| {
        let a = net.arc(k);
        a.head != o && a.tail != d
    };
    let to_dest: Vec<Option<i64>> = (0..net.num_nodes()).map(|i| st.get(i, d)).collect();
    let (best_cost, best_path) = cheapest_feasible_path(net, o, d, budget, &to_dest, usable).ok_or_else(empty)?;
    let from_o = cheapest_costs(net, o, false, usable);
    let to_d = cheapest_costs(net, d, true, usable);
    let keep_ratio = S::one() - eta;
    let mut mask = vec![false; net.num_arcs()];
    for (k, a) in net.arcs().iter().enumerate() {
        if !usable(k) {
            continue;
        }
        let (Some(ci), Some(cj)) = (from_o[a.tail], to_d[a.head]) else { continue };
        let (Some(ti), Some(tj)) = (st.get(o, a.tail), st.get(a.head, d)) else { continue };
        mask[k] = ((ci + a.cost + cj) * keep_ratio).approx_le(best_cost) && ti + a.time + tj <= budget;
    }
    for &k in &best_path {
        debug_assert!(mask[k], "cheapest feasible path must survive pruning");
        mask[k] = true;
    }
    let arcs = (0..mask.len()).filter(|&k| mask[k]).collect();
    Ok(AdmissibleArcs { vehicle: vehicle.id, mask, arcs, best_cost, best_path })
}
