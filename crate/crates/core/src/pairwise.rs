//! Scheduling heuristic for large fleets: pick disjoint pairs of vehicles
//! that share a road segment, align their windows at the merge node, then
//! solve the scheduling model without the platoon size limit and repair.

use platoon_mip::{solve, MipConfig};

use crate::error::{Error, Result};
use crate::evaluate::{decode_tif, PlatoonSolution};
use crate::formulations::{build_matching, build_tif, FixedRoutes, TifVariant};
use crate::instance::{Instance, Vehicle};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct PairCandidate<S> {
    pub u: usize,
    pub v: usize,
    /// Shared arcs, consecutive on both routes.
    pub segment: Vec<usize>,
    /// First node of the segment.
    pub merge: usize,
    pub savings: S,
}

/// For every vehicle pair, the shared run of consecutive arcs with the
/// largest savings whose entry windows meet at its first node.
pub fn enumerate_pairs<S: Scalar>(inst: &Instance<S>, routes: &FixedRoutes) -> Vec<PairCandidate<S>> {
    let net = &inst.network;
    let positions: Vec<std::collections::HashMap<usize, usize>> =
        routes.paths.iter().map(|p| p.iter().enumerate().map(|(pos, &k)| (k, pos)).collect()).collect();
    let mut out = Vec::new();
    for u in 0..routes.num_vehicles() {
        for v in u + 1..routes.num_vehicles() {
            let (pu, pv) = (&routes.paths[u], &routes.paths[v]);
            let mut best: Option<PairCandidate<S>> = None;
            let mut a = 0;
            while a < pu.len() {
                let Some(&b) = positions[v].get(&pu[a]) else {
                    a += 1;
                    continue;
                };
                let mut len = 1;
                while a + len < pu.len() && b + len < pv.len() && pu[a + len] == pv[b + len] {
                    len += 1;
                }
                let merge = net.arc(pu[a]).tail;
                let (ulo, uhi) = routes.entry_window(inst, u, a);
                let (vlo, vhi) = routes.entry_window(inst, v, b);
                let segment = pu[a..a + len].to_vec();
                let savings = inst.eta * net.path_cost(&segment);
                if ulo.max(vlo) <= uhi.min(vhi)
                    && savings > S::zero()
                    && best.as_ref().is_none_or(|c| savings > c.savings)
                {
                    best = Some(PairCandidate { u, v, segment, merge, savings });
                }
                a += len;
            }
            out.extend(best);
        }
    }
    out
}

/// Indices of the candidates chosen by the cardinality-limited matching.
pub fn select_pairs<S: Scalar>(cands: &[PairCandidate<S>], gamma: f64, fleet: usize, cfg: &MipConfig) -> Result<Vec<usize>> {
    let pairs: Vec<(usize, usize, f64)> = cands.iter().map(|c| (c.u, c.v, c.savings.to_f64())).collect();
    let mm = build_matching(&pairs, gamma, fleet);
    let res = solve(&mm.model, cfg)?;
    if !res.status.has_solution() {
        return Err(Error::NoFeasibleSolution);
    }
    Ok(mm.w.iter().enumerate().filter(|(_, w)| res.value(**w) > 0.5).map(|(k, _)| k).collect())
}

/// Narrows the windows of each chosen pair so both vehicles have the same
/// entry window at their merge node.
pub fn shrink_windows<S: Scalar>(
    inst: &Instance<S>,
    routes: &FixedRoutes,
    cands: &[PairCandidate<S>],
    chosen: &[usize],
) -> Result<Vec<Vehicle>> {
    let mut vehicles = inst.vehicles.clone();
    for &c in chosen {
        let pc = &cands[c];
        let (ulo, uhi) = routes.bounds[pc.u].window(pc.merge).expect("merge node is on the route");
        let (vlo, vhi) = routes.bounds[pc.v].window(pc.merge).expect("merge node is on the route");
        for (me, (lo, hi), (olo, ohi)) in [(pc.u, (ulo, uhi), (vlo, vhi)), (pc.v, (vlo, vhi), (ulo, uhi))] {
            let veh = &mut vehicles[me];
            veh.earliest += (olo - lo).max(0);
            veh.latest -= (hi - ohi).max(0);
            if veh.latest - veh.earliest < inst.network.path_time(&routes.paths[me]) {
                return Err(Error::ShrinkInfeasible { vehicle: me, earliest: veh.earliest, latest: veh.latest });
            }
        }
    }
    Ok(vehicles)
}

#[derive(Debug, Clone)]
pub struct PairwiseOutcome<S> {
    pub candidates: Vec<PairCandidate<S>>,
    pub chosen: Vec<usize>,
    pub shrunk: Vec<Vehicle>,
    pub solution: PlatoonSolution,
    /// Savings claimed by the relaxed model, before repair.
    pub relaxed_savings: f64,
}

/// Solves the scheduling model on the shrunk windows without the platoon
/// size limit, then splits every arc-time bundle into platoons of at most
/// the limit in ascending id order.
pub fn solve_relaxed_and_repair<S: Scalar>(
    inst: &Instance<S>,
    routes: &FixedRoutes,
    shrunk: &[Vehicle],
    cfg: &MipConfig,
) -> Result<(PlatoonSolution, f64)> {
    let narrowed = inst.with_vehicles(shrunk.to_vec())?;
    let narrowed_routes = FixedRoutes::new(&narrowed, routes.paths.clone())?;
    let tif = build_tif(&narrowed, narrowed_routes, TifVariant::Relaxed)?;
    let cfg = MipConfig { initial_solution: Some(tif.earliest_hint(&narrowed)), ..cfg.clone() };
    let res = solve(&tif.model, &cfg)?;
    // Decoding against the original instance checks the real windows and Q.
    let sol = decode_tif(inst, &tif, &res)?;
    Ok((sol, res.objective))
}

pub fn pairwise_schedule<S: Scalar>(
    inst: &Instance<S>,
    routes: &FixedRoutes,
    gamma: f64,
    cfg: &MipConfig,
) -> Result<PairwiseOutcome<S>> {
    let candidates = enumerate_pairs(inst, routes);
    let chosen = select_pairs(&candidates, gamma, inst.num_vehicles(), cfg)?;
    let shrunk = shrink_windows(inst, routes, &candidates, &chosen)?;
    let (solution, relaxed_savings) = solve_relaxed_and_repair(inst, routes, &shrunk, cfg)?;
    Ok(PairwiseOutcome { candidates, chosen, shrunk, solution, relaxed_savings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::six_node_example;
    use num_rational::Rational64;

    #[test]
    fn example_routes_give_one_pair() {
        let inst = six_node_example::<Rational64>();
        let routes =
            FixedRoutes::from_node_pairs(&inst, &[vec![(0, 1)], vec![(0, 2)], vec![(0, 2), (2, 3), (3, 5)]]).unwrap();
        let cands = enumerate_pairs(&inst, &routes);
        assert_eq!(cands.len(), 1);
        let c = &cands[0];
        assert_eq!((c.u, c.v, c.merge, c.savings), (1, 2, 0, Rational64::new(1, 10)));
        assert_eq!(c.segment, vec![inst.network.find_arc(0, 2).unwrap()]);
    }
}
