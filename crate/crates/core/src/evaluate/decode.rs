use std::collections::{BTreeMap, HashMap};

use platoon_mip::MipResult;

use crate::error::{Error, Result};
use crate::evaluate::{check, Platoon, PlatoonSolution, TimedArc, VehicleRoute};
use crate::formulations::{CpfModel, TifModel, TsfModel};
use crate::instance::Instance;
use crate::scalar::Scalar;

fn incumbent(result: &MipResult) -> Result<&[f64]> {
    if result.status.has_solution() {
        Ok(&result.values)
    } else {
        Err(Error::NoFeasibleSolution)
    }
}

fn verified<S: Scalar>(inst: &Instance<S>, sol: PlatoonSolution) -> Result<PlatoonSolution> {
    let rep = check(inst, &sol);
    if rep.is_ok() {
        Ok(sol)
    } else {
        Err(Error::DecodeInconsistent(rep.to_string()))
    }
}

/// Routes from the arc indicators, entry times from the time variables and
/// platoons from the pair indicators.
pub fn decode_cpf<S: Scalar>(inst: &Instance<S>, cpf: &CpfModel, result: &MipResult) -> Result<PlatoonSolution> {
    let values = incumbent(result)?;
    let net = &inst.network;
    let on = |var: &platoon_mip::VarId| values[var.index()] > 0.5;
    let mut routes = Vec::with_capacity(inst.num_vehicles());
    for v in &inst.vehicles {
        let mut arcs = Vec::new();
        let mut node = v.origin;
        while node != v.dest {
            let k = net
                .out_arcs(node)
                .iter()
                .copied()
                .find(|&k| cpf.x.get(&(v.id, k)).is_some_and(on))
                .ok_or_else(|| Error::DecodeInconsistent(format!("vehicle {} route stops at node {node}", v.id)))?;
            if arcs.len() > net.num_nodes() {
                return Err(Error::DecodeInconsistent(format!("vehicle {} route cycles", v.id)));
            }
            let entry = values[cpf.t[&(v.id, node)].index()];
            arcs.push(TimedArc { tail: node, head: net.arc(k).head, entry });
            node = net.arc(k).head;
        }
        routes.push(VehicleRoute { vehicle: v.id, arcs });
    }
    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (&(k, v, w), var) in &cpf.y {
        if on(var) {
            groups.entry((k, v)).or_insert_with(|| vec![v]).push(w);
        }
    }
    let platoons = groups
        .into_iter()
        .map(|((k, leader), mut members)| {
            members.sort_unstable();
            let a = net.arc(k);
            Platoon { tail: a.tail, head: a.head, entry: values[cpf.t[&(leader, a.tail)].index()], leader, members }
        })
        .collect();
    verified(inst, PlatoonSolution { routes, platoons })
}

/// Follows each vehicle's flow through the expanded network; platoons are
/// formed per expanded arc in ascending-id chunks of the size limit.
pub fn decode_tsf<S: Scalar>(inst: &Instance<S>, tsf: &TsfModel<S>, result: &MipResult) -> Result<PlatoonSolution> {
    let values = incumbent(result)?;
    let net = &inst.network;
    // (vehicle, node, time) -> next step.
    let mut step: HashMap<(usize, usize, i64), (Option<usize>, usize, i64)> = HashMap::new();
    for &(v, p, var) in &tsf.moves {
        if values[var.index()] > 0.5 {
            let a = tsf.tsn.ts_arcs[p];
            step.insert((v, a.tail, a.start), (Some(a.arc), a.head, a.start + net.arc(a.arc).time));
        }
    }
    for &(v, p, var) in &tsf.waits {
        if values[var.index()] > 0.5 {
            let w = tsf.tsn.time_arcs[p];
            step.insert((v, w.node, w.from), (None, w.node, w.to));
        }
    }
    let mut routes = Vec::with_capacity(inst.num_vehicles());
    for v in &inst.vehicles {
        let (mut node, mut time) = (v.origin, v.earliest);
        let mut arcs = Vec::new();
        while let Some(&(arc, head, end)) = step.get(&(v.id, node, time)) {
            if let Some(k) = arc {
                arcs.push(TimedArc { tail: node, head: net.arc(k).head, entry: time as f64 });
            }
            (node, time) = (head, end);
        }
        if node != v.dest {
            return Err(Error::DecodeInconsistent(format!("vehicle {} flow stops at node {node}", v.id)));
        }
        routes.push(VehicleRoute { vehicle: v.id, arcs: drop_cycles(v.origin, arcs) });
    }
    verified(inst, PlatoonSolution::from_routes(routes, inst.q))
}

/// Cuts out node revisits: the vehicle waits at the first visit instead.
fn drop_cycles(origin: usize, arcs: Vec<TimedArc>) -> Vec<TimedArc> {
    let mut out: Vec<TimedArc> = Vec::with_capacity(arcs.len());
    for a in arcs {
        if a.head == origin {
            out.clear();
        } else if let Some(pos) = out.iter().position(|b| b.tail == a.head) {
            out.truncate(pos);
            continue;
        }
        if a.head != origin {
            out.push(a);
        }
    }
    out
}

/// Timed routes from the scheduling model, grouped into platoons of at most
/// the size limit. For the relaxed model this is the repair step.
pub fn decode_tif<S: Scalar>(inst: &Instance<S>, tif: &TifModel<S>, result: &MipResult) -> Result<PlatoonSolution> {
    let values = incumbent(result)?;
    let routes = tif.schedule(inst, values)?;
    verified(inst, PlatoonSolution::from_routes(routes, inst.q))
}
