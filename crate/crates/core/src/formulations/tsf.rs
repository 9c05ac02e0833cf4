use std::collections::HashMap;

use platoon_mip::{MipModel, ObjectiveSense, Sense, VarId};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::network::TimeSpaceNetwork;
use crate::scalar::Scalar;

/// Time-space formulation: per-vehicle flows on the expanded network and an
/// integer platoon count on every move arc.
#[derive(Debug, Clone)]
pub struct TsfModel<S> {
    pub model: MipModel,
    pub tsn: TimeSpaceNetwork<S>,
    /// `(vehicle, index into ts_arcs, var)`.
    pub moves: Vec<(usize, usize, VarId)>,
    /// `(vehicle, index into time_arcs, var)`.
    pub waits: Vec<(usize, usize, VarId)>,
    /// Index into ts_arcs -> platoon count.
    pub y: HashMap<usize, VarId>,
}

pub fn build_tsf<S: Scalar>(inst: &Instance<S>, tsn: TimeSpaceNetwork<S>) -> Result<TsfModel<S>> {
    let net = &inst.network;
    for v in &inst.vehicles {
        if v.latest > inst.horizon {
            return Err(Error::HorizonExceeded { time: v.latest, horizon: inst.horizon });
        }
    }
    let index = tsn.node_index();
    let mut m = MipModel::new("tsf");
    let mut moves = Vec::new();
    let mut waits = Vec::new();
    let mut users: HashMap<usize, Vec<VarId>> = HashMap::new();

    for v in &inst.vehicles {
        // Per expanded node: outgoing minus incoming flow terms.
        let mut balance: HashMap<usize, Vec<(VarId, f64)>> = HashMap::new();
        for (p, a) in tsn.ts_arcs.iter().enumerate() {
            let travel = net.arc(a.arc).time;
            if !tsn.vehicle_may_move(v.id, a, travel) {
                continue;
            }
            let (Some(&from), Some(&to)) = (index.get(&(a.tail, a.start)), index.get(&(a.head, a.start + travel))) else {
                continue;
            };
            let var = m.add_binary(format!("x_{}_{}_{}_{}", a.tail, a.head, a.start, v.id));
            m.add_objective_term(var, tsn.unit_cost[a.arc].to_f64());
            balance.entry(from).or_default().push((var, 1.0));
            balance.entry(to).or_default().push((var, -1.0));
            users.entry(p).or_default().push(var);
            moves.push((v.id, p, var));
        }
        for (p, w) in tsn.time_arcs.iter().enumerate() {
            if !tsn.vehicle_may_wait(v.id, w) {
                continue;
            }
            let var = m.add_binary(format!("w_{}_{}_{}", w.node, w.from, v.id));
            balance.entry(index[&(w.node, w.from)]).or_default().push((var, 1.0));
            balance.entry(index[&(w.node, w.to)]).or_default().push((var, -1.0));
            waits.push((v.id, p, var));
        }
        let source = index.get(&(v.origin, v.earliest)).copied();
        let sink = index.get(&(v.dest, v.latest)).copied();
        let (Some(source), Some(sink)) = (source, sink) else {
            return Err(Error::InfeasibleVehicle { vehicle: v.id });
        };
        balance.entry(source).or_default();
        balance.entry(sink).or_default();
        let mut nodes: Vec<_> = balance.into_iter().collect();
        nodes.sort_by_key(|(id, _)| *id);
        for (id, terms) in nodes {
            let rhs = if id == source { 1.0 } else if id == sink { -1.0 } else { 0.0 };
            m.add_constraint(format!("flow_{id}_{}", v.id), terms, Sense::Eq, rhs);
        }
    }

    let q = inst.q_effective();
    let mut y = HashMap::new();
    let mut arcs: Vec<_> = users.into_iter().collect();
    arcs.sort_by_key(|(p, _)| *p);
    for (p, xs) in arcs {
        let a = tsn.ts_arcs[p];
        let cap = inst.q.platoons(xs.len());
        let yv = m.add_integer(format!("y_{}_{}_{}", a.tail, a.head, a.start), 0.0, cap as f64);
        m.add_objective_term(yv, tsn.fixed_cost[a.arc].to_f64());
        for (k, &xv) in xs.iter().enumerate() {
            m.add_constraint(format!("link_{}_{}_{}_{k}", a.tail, a.head, a.start), vec![(xv, 1.0), (yv, -1.0)], Sense::Le, 0.0);
        }
        if xs.len() > q {
            let mut terms: Vec<(VarId, f64)> = xs.iter().map(|&xv| (xv, 1.0)).collect();
            terms.push((yv, -(q as f64)));
            m.add_constraint(format!("cap_{}_{}_{}", a.tail, a.head, a.start), terms, Sense::Le, 0.0);
        }
        y.insert(p, yv);
    }
    m.objective.sense = ObjectiveSense::Minimize;
    Ok(TsfModel { model: m, tsn, moves, waits, y })
}
