use std::collections::{BTreeMap, BTreeSet, HashMap};

use platoon_mip::{MipModel, ObjectiveSense, Sense, VarId};

use crate::error::{Error, Result};
use crate::formulations::vehicle_data;
use crate::instance::Instance;
use crate::scalar::Scalar;

/// Continuous-time formulation with per-vehicle routing, pairwise platoon
/// indicators and big-M timing links.
#[derive(Debug, Clone)]
pub struct CpfModel {
    pub model: MipModel,
    /// `(vehicle, arc)` -> route indicator.
    pub x: HashMap<(usize, usize), VarId>,
    /// `(arc, leader, follower)` -> platoon indicator, `leader < follower`.
    pub y: HashMap<(usize, usize, usize), VarId>,
    /// `(vehicle, node)` -> entry time.
    pub t: HashMap<(usize, usize), VarId>,
}

pub fn build_cpf<S: Scalar>(inst: &Instance<S>) -> Result<CpfModel> {
    let net = &inst.network;
    let eta = inst.eta.to_f64();
    let (bounds, adm) = vehicle_data(inst)?;
    let q = inst.q_effective() as f64;
    let mut m = MipModel::new("cpf");
    let mut x = HashMap::new();
    let mut y = HashMap::new();
    let mut t = HashMap::new();

    for v in &inst.vehicles {
        let b = &bounds[v.id];
        let mut nodes = BTreeSet::from([v.origin, v.dest]);
        for &k in &adm[v.id].arcs {
            let a = net.arc(k);
            nodes.insert(a.tail);
            nodes.insert(a.head);
            let var = m.add_binary(format!("x_{}_{}_{}", a.tail, a.head, v.id));
            m.add_objective_term(var, a.cost.to_f64());
            x.insert((v.id, k), var);
        }
        for &i in &nodes {
            let (lo, hi) = b.require(i)?;
            t.insert((v.id, i), m.add_continuous(format!("t_{}_{}", i, v.id), lo as f64, hi as f64));
        }
        for &i in &nodes {
            let mut terms: Vec<(VarId, f64)> = Vec::new();
            terms.extend(net.out_arcs(i).iter().filter_map(|&k| x.get(&(v.id, k))).map(|&var| (var, 1.0)));
            terms.extend(net.in_arcs(i).iter().filter_map(|&k| x.get(&(v.id, k))).map(|&var| (var, -1.0)));
            let rhs = if i == v.origin { 1.0 } else if i == v.dest { -1.0 } else { 0.0 };
            if terms.is_empty() && rhs != 0.0 {
                return Err(Error::InfeasibleVehicle { vehicle: v.id });
            }
            m.add_constraint(format!("flow_{}_{}", i, v.id), terms, Sense::Eq, rhs);
        }
        for &k in &adm[v.id].arcs {
            let a = net.arc(k);
            let (_, hi_i) = b.require(a.tail)?;
            let (lo_j, _) = b.require(a.head)?;
            let big = (hi_i - lo_j + a.time).max(0) as f64;
            if big == 0.0 {
                continue;
            }
            let terms = vec![(t[&(v.id, a.head)], 1.0), (t[&(v.id, a.tail)], -1.0), (x[&(v.id, k)], -big)];
            m.add_constraint(format!("time_{}_{}_{}", a.tail, a.head, v.id), terms, Sense::Ge, a.time as f64 - big);
        }
    }

    let nv = inst.num_vehicles();
    for (k, a) in net.arcs().iter().enumerate() {
        // (leader, follower) pairs on this arc.
        let mut followers: BTreeMap<usize, Vec<VarId>> = BTreeMap::new();
        let mut led: BTreeMap<usize, Vec<VarId>> = BTreeMap::new();
        for v in 0..nv {
            for w in v + 1..nv {
                if !(adm[v].contains(k) && adm[w].contains(k)) {
                    continue;
                }
                let (Some((lo_v, hi_v)), Some((lo_w, hi_w))) = (bounds[v].window(a.tail), bounds[w].window(a.tail)) else {
                    continue;
                };
                let (m0, m1) = (hi_w - lo_v, hi_v - lo_w);
                if m0 < 0 || m1 < 0 {
                    continue;
                }
                let var = m.add_binary(format!("y_{}_{}_{}_{}", a.tail, a.head, v, w));
                m.add_objective_term(var, -eta * a.cost.to_f64());
                y.insert((k, v, w), var);
                let (tv, tw) = (t[&(v, a.tail)], t[&(w, a.tail)]);
                m.add_constraint(format!("pair_{}_{}_{}_{}_{v}", a.tail, a.head, v, w), vec![(var, 1.0), (x[&(v, k)], -1.0)], Sense::Le, 0.0);
                m.add_constraint(format!("pair_{}_{}_{}_{}_{w}", a.tail, a.head, v, w), vec![(var, 1.0), (x[&(w, k)], -1.0)], Sense::Le, 0.0);
                m.add_constraint(
                    format!("sync_{}_{}_{}_{}_a", a.tail, a.head, v, w),
                    vec![(tw, 1.0), (tv, -1.0), (var, m0 as f64)],
                    Sense::Le,
                    m0 as f64,
                );
                m.add_constraint(
                    format!("sync_{}_{}_{}_{}_b", a.tail, a.head, v, w),
                    vec![(tv, 1.0), (tw, -1.0), (var, m1 as f64)],
                    Sense::Le,
                    m1 as f64,
                );
                followers.entry(v).or_default().push(var);
                led.entry(w).or_default().push(var);
            }
        }
        for (w, vars) in &led {
            if vars.len() > 1 {
                let terms = vars.iter().map(|&var| (var, 1.0)).collect();
                m.add_constraint(format!("lead_{}_{}_{}", a.tail, a.head, w), terms, Sense::Le, 1.0);
            }
        }
        for (v, vars) in &followers {
            let above = led.get(v).map_or(&[][..], Vec::as_slice);
            if vars.len() as f64 <= q - 1.0 && above.is_empty() {
                continue;
            }
            let mut terms: Vec<(VarId, f64)> = vars.iter().map(|&var| (var, 1.0)).collect();
            terms.extend(above.iter().map(|&var| (var, q - 1.0)));
            m.add_constraint(format!("size_{}_{}_{}", a.tail, a.head, v), terms, Sense::Le, q - 1.0);
        }
    }
    m.objective.sense = ObjectiveSense::Minimize;
    Ok(CpfModel { model: m, x, y, t })
}
