use std::collections::{BTreeMap, HashMap, VecDeque};

use platoon_mip::{MipModel, ObjectiveSense, Sense, VarId};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::network::AdmissibleArcs;
use crate::scalar::Scalar;

/// Routing cost of one vehicle on one arc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArcCost<S> {
    /// Unit part paid by the vehicle, fixed part shared by all vehicles on
    /// the arc.
    Split { unit: S, fixed: S },
    /// A single per-vehicle coefficient.
    Single(S),
}

impl<S: Scalar> ArcCost<S> {
    /// Cost if the vehicle drives the arc alone.
    pub fn alone(self) -> S {
        match self {
            ArcCost::Split { unit, fixed } => unit + fixed,
            ArcCost::Single(c) => c,
        }
    }
}

/// Per `(vehicle, arc)` routing costs for one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable<S> {
    pub iteration: usize,
    costs: BTreeMap<(usize, usize), ArcCost<S>>,
}

impl<S: Scalar> CostTable<S> {
    pub fn empty(iteration: usize) -> Self {
        CostTable { iteration, costs: BTreeMap::new() }
    }

    /// Split costs `((1 - eta) c, eta c)` on every admissible arc.
    pub fn base(inst: &Instance<S>, adm: &[AdmissibleArcs<S>]) -> Self {
        let mut t = Self::empty(1);
        for a in adm {
            for &k in &a.arcs {
                t.set(a.vehicle, k, Self::split(inst, k));
            }
        }
        t
    }

    pub fn split(inst: &Instance<S>, arc: usize) -> ArcCost<S> {
        let a = inst.network.arc(arc);
        ArcCost::Split { unit: a.unit_cost(inst.eta), fixed: a.fixed_cost(inst.eta) }
    }

    pub fn get(&self, vehicle: usize, arc: usize) -> Option<ArcCost<S>> {
        self.costs.get(&(vehicle, arc)).copied()
    }

    pub fn set(&mut self, vehicle: usize, arc: usize, cost: ArcCost<S>) {
        self.costs.insert((vehicle, arc), cost);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &ArcCost<S>)> {
        self.costs.iter()
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }
}

/// Fixed-charge routing model: binary route indicators per vehicle and a
/// binary arc-use indicator that carries the shared fixed cost.
#[derive(Debug, Clone)]
pub struct FcnfModel {
    pub model: MipModel,
    /// Per vehicle: `(arc, var)`.
    pub x: Vec<Vec<(usize, VarId)>>,
    /// Arc -> use indicator, for arcs that have a split-cost vehicle.
    pub y: BTreeMap<usize, VarId>,
    split: HashMap<(usize, usize), bool>,
}

pub fn build_fcnf<S: Scalar>(inst: &Instance<S>, adm: &[AdmissibleArcs<S>], costs: &CostTable<S>) -> Result<FcnfModel> {
    let net = &inst.network;
    let mut m = MipModel::new("fcnf");
    let mut x = Vec::with_capacity(inst.num_vehicles());
    let mut y = BTreeMap::new();
    let mut split = HashMap::new();
    let mut fixed: BTreeMap<usize, S> = BTreeMap::new();
    let mut links: Vec<(usize, usize, VarId)> = Vec::new();

    for v in &inst.vehicles {
        let mut vars = Vec::with_capacity(adm[v.id].arcs.len());
        let mut balance: BTreeMap<usize, Vec<(VarId, f64)>> = BTreeMap::from([(v.origin, vec![]), (v.dest, vec![])]);
        let mut duration = Vec::new();
        for &k in &adm[v.id].arcs {
            let a = net.arc(k);
            let cost = costs.get(v.id, k).ok_or(Error::MissingCost { vehicle: v.id, tail: a.tail, head: a.head })?;
            let var = m.add_binary(format!("x_{}_{}_{}", a.tail, a.head, v.id));
            match cost {
                ArcCost::Split { unit, fixed: f } => {
                    m.add_objective_term(var, unit.to_f64());
                    let entry = fixed.entry(k).or_insert(f);
                    *entry = entry.max_of(f);
                    links.push((v.id, k, var));
                    split.insert((v.id, k), true);
                }
                ArcCost::Single(c) => {
                    m.add_objective_term(var, c.to_f64());
                    split.insert((v.id, k), false);
                }
            }
            balance.entry(a.tail).or_default().push((var, 1.0));
            balance.entry(a.head).or_default().push((var, -1.0));
            duration.push((var, a.time as f64));
            vars.push((k, var));
        }
        for (i, terms) in balance {
            let rhs = if i == v.origin { 1.0 } else if i == v.dest { -1.0 } else { 0.0 };
            m.add_constraint(format!("flow_{}_{}", i, v.id), terms, Sense::Eq, rhs);
        }
        m.add_constraint(format!("budget_{}", v.id), duration, Sense::Le, v.budget() as f64);
        x.push(vars);
    }
    for (&k, f) in &fixed {
        let a = net.arc(k);
        let var = m.add_binary(format!("y_{}_{}", a.tail, a.head));
        m.add_objective_term(var, f.to_f64());
        y.insert(k, var);
    }
    for (v, k, var) in links {
        let a = net.arc(k);
        m.add_constraint(format!("link_{}_{}_{}", a.tail, a.head, v), vec![(var, 1.0), (y[&k], -1.0)], Sense::Le, 0.0);
    }
    m.objective.sense = ObjectiveSense::Minimize;
    Ok(FcnfModel { model: m, x, y, split })
}

impl FcnfModel {
    /// Start vector routing each vehicle along `paths[v]`.
    pub fn hint(&self, paths: &[Vec<usize>]) -> Vec<f64> {
        let mut values = vec![0.0; self.model.num_vars()];
        for (v, vars) in self.x.iter().enumerate() {
            for &(k, var) in vars {
                if paths[v].contains(&k) {
                    values[var.index()] = 1.0;
                    if self.split[&(v, k)] {
                        values[self.y[&k].index()] = 1.0;
                    }
                }
            }
        }
        values
    }

    /// One origin-destination path per vehicle from the chosen arcs. Stray
    /// cycles in the flow are dropped.
    pub fn routes<S: Scalar>(&self, inst: &Instance<S>, values: &[f64]) -> Result<Vec<Vec<usize>>> {
        let net = &inst.network;
        let mut out = Vec::with_capacity(self.x.len());
        for (v, vars) in self.x.iter().enumerate() {
            let veh = &inst.vehicles[v];
            let chosen: Vec<usize> = vars.iter().filter(|(_, var)| values[var.index()] > 0.5).map(|&(k, _)| k).collect();
            let mut parent: HashMap<usize, usize> = HashMap::new();
            let mut queue = VecDeque::from([veh.origin]);
            while let Some(i) = queue.pop_front() {
                if i == veh.dest {
                    break;
                }
                for &k in &chosen {
                    let a = net.arc(k);
                    if a.tail == i && a.head != veh.origin && !parent.contains_key(&a.head) {
                        parent.insert(a.head, k);
                        queue.push_back(a.head);
                    }
                }
            }
            let mut path = Vec::new();
            let mut node = veh.dest;
            while node != veh.origin {
                let &k = parent
                    .get(&node)
                    .ok_or_else(|| Error::DecodeInconsistent(format!("vehicle {v} has no routed path")))?;
                path.push(k);
                node = net.arc(k).tail;
            }
            path.reverse();
            out.push(path);
        }
        Ok(out)
    }
}
