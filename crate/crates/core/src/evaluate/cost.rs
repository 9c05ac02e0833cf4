use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluate::{check, PlatoonSolution};
use crate::instance::Instance;
use crate::scalar::Scalar;

/// Total delivery cost: every vehicle pays each arc in full, and every
/// platoon member other than the leader saves `eta` of the arc cost.
pub fn total_cost<S: Scalar>(inst: &Instance<S>, sol: &PlatoonSolution) -> Result<S> {
    let rep = check(inst, sol);
    if !rep.is_ok() {
        return Err(Error::InvalidSolution(rep.to_string()));
    }
    let net = &inst.network;
    let arc_cost = |tail, head| net.arc(net.find_arc(tail, head).expect("checked")).cost;
    let mut total = S::zero();
    for r in &sol.routes {
        for a in &r.arcs {
            total = total + arc_cost(a.tail, a.head);
        }
    }
    for p in &sol.platoons {
        let followers = S::from_int(p.members.len() as i64 - 1);
        total = total - followers * inst.eta * arc_cost(p.tail, p.head);
    }
    Ok(total)
}

/// Sum over vehicles of the cheapest time-feasible path cost, i.e. the cost
/// of driving alone.
pub fn shortest_path_cost<S: Scalar>(inst: &Instance<S>) -> Result<S> {
    let mut total = S::zero();
    for v in &inst.vehicles {
        let adm = crate::network::prune_arcs(&inst.network, v, inst.travel_times(), inst.eta)?;
        total = total + adm.best_cost;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Indicators {
    /// Cost saved relative to driving alone, as a fraction of that cost.
    pub saving: f64,
    /// Saving implied by the lower bound.
    pub ub_saving: f64,
    pub relative_gap: f64,
    pub optimality_gap: Option<f64>,
}

/// Saving ratios and gaps of an objective `obj` with lower bound `bound`
/// and, when known, the optimum `opt`.
pub fn indicators<S: Scalar>(inst: &Instance<S>, obj: S, bound: S, opt: Option<S>) -> Result<Indicators> {
    let spc = shortest_path_cost(inst)?;
    indicators_with_spc(spc, obj, bound, opt)
}

pub fn indicators_with_spc<S: Scalar>(spc: S, obj: S, bound: S, opt: Option<S>) -> Result<Indicators> {
    if spc.is_zero() {
        return Err(Error::DivisionDomain("shortest path cost"));
    }
    if bound.is_zero() {
        return Err(Error::DivisionDomain("bound"));
    }
    let ratio = |num: S, den: S| ((num).abs() / den).to_f64();
    let optimality_gap = match opt {
        Some(o) if o.is_zero() => return Err(Error::DivisionDomain("optimum")),
        Some(o) => Some(ratio(obj - o, o)),
        None => None,
    };
    Ok(Indicators {
        saving: ((spc - obj) / spc).to_f64(),
        ub_saving: ((spc - bound) / spc).to_f64(),
        relative_gap: ratio(obj - bound, bound),
        optimality_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluate::{Platoon, TimedArc, VehicleRoute};
    use crate::instance::{QLimit, Vehicle};
    use crate::network::{Arc, RoadNetwork};
    use num_rational::Rational64;

    #[test]
    fn three_member_platoon() {
        let net = RoadNetwork::new(2, vec![Arc::new(0, 1, Rational64::from_int(1), 1)]).unwrap();
        let vs = (0..3).map(|id| Vehicle { id, origin: 0, dest: 1, earliest: 0, latest: 1 }).collect();
        let inst = Instance::new(net, vs, Rational64::new(1, 10), QLimit::Limited(3), 1.0, 1).unwrap();
        let routes = (0..3)
            .map(|vehicle| VehicleRoute { vehicle, arcs: vec![TimedArc { tail: 0, head: 1, entry: 0.0 }] })
            .collect();
        let mut sol = PlatoonSolution { routes, platoons: vec![] };
        assert_eq!(total_cost(&inst, &sol).unwrap(), Rational64::from_int(3));
        sol.platoons.push(Platoon { tail: 0, head: 1, entry: 0.0, leader: 0, members: vec![0, 1, 2] });
        assert_eq!(total_cost(&inst, &sol).unwrap(), Rational64::new(28, 10));
        sol.platoons[0].leader = 1;
        assert!(matches!(total_cost(&inst, &sol), Err(Error::InvalidSolution(_))));
    }

    #[test]
    fn indicator_edge_cases() {
        let i = indicators_with_spc(5.0, 4.0, 4.0, Some(4.0)).unwrap();
        assert_eq!((i.relative_gap, i.optimality_gap), (0.0, Some(0.0)));
        assert_eq!(indicators_with_spc(5.0, 5.0, 4.0, None).unwrap().saving, 0.0);
        assert!((indicators_with_spc(5.0, 6.0, 4.0, None).unwrap().saving + 0.2).abs() < 1e-12);
        assert!(matches!(indicators_with_spc(0.0, 1.0, 1.0, None), Err(Error::DivisionDomain(_))));
        assert!(matches!(indicators_with_spc(1.0, 1.0, 0.0, None), Err(Error::DivisionDomain(_))));
    }
}
