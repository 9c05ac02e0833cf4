use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::evaluate::PlatoonSolution;
use crate::formulations::{ArcCost, CostTable, FixedRoutes};
use crate::instance::{Instance, TimeBounds};
use crate::network::AdmissibleArcs;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    /// Vehicles off an arc are charged the full fixed cost, or part of it if
    /// they could meet a vehicle on it.
    #[default]
    Icmp,
    /// Vehicles off a used arc are charged the unit cost only.
    Llcmp,
}

/// How a `(vehicle, arc)` cost was set for the next iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// The vehicle drove the arc: its realized average cost.
    Realized,
    /// Others drove the arc, none within reach of this vehicle's window.
    Unreachable,
    /// Others drove the arc and some could meet this vehicle.
    Reachable,
    /// A repeated composition that earlier lured the vehicle onto the arc:
    /// the cost from two iterations after that is reused.
    Repeated,
}

/// Vehicle sets entering each arc together, per arc.
pub type Compositions = BTreeMap<usize, BTreeSet<Vec<usize>>>;

pub fn compositions<S: Scalar>(inst: &Instance<S>, sol: &PlatoonSolution) -> Compositions {
    let net = &inst.network;
    let mut bundles: BTreeMap<(usize, u64), Vec<usize>> = BTreeMap::new();
    for r in &sol.routes {
        for a in &r.arcs {
            let k = net.find_arc(a.tail, a.head).expect("checked solution");
            bundles.entry((k, a.entry.to_bits())).or_default().push(r.vehicle);
        }
    }
    let mut out = Compositions::new();
    for ((k, _), mut vs) in bundles {
        vs.sort_unstable();
        out.entry(k).or_default().insert(vs);
    }
    out
}

/// What earlier iterations looked like, indexed by iteration number.
#[derive(Debug, Clone)]
pub struct CostHistory<S> {
    /// Cost table used in iteration `n`.
    pub tables: BTreeMap<usize, CostTable<S>>,
    /// Scenario behind each entry of `tables[n]`.
    pub scenarios: BTreeMap<usize, HashMap<(usize, usize), Scenario>>,
    /// Compositions realized in iteration `n`.
    pub compositions: BTreeMap<usize, Compositions>,
}

impl<S> Default for CostHistory<S> {
    fn default() -> Self {
        CostHistory { tables: BTreeMap::new(), scenarios: BTreeMap::new(), compositions: BTreeMap::new() }
    }
}

/// Result of a cost update.
#[derive(Debug, Clone)]
pub struct CostUpdate<S> {
    pub table: CostTable<S>,
    pub scenarios: HashMap<(usize, usize), Scenario>,
    /// Repeated-composition triggers whose earlier cost was missing.
    pub fallbacks: usize,
}

/// Average cost per vehicle of `n` vehicles driving an arc at the same time.
pub fn realized_cost<S: Scalar>(inst: &Instance<S>, arc: usize, n: usize) -> S {
    let a = inst.network.arc(arc);
    let groups = S::from_int(inst.q.platoons(n) as i64);
    let n = S::from_int(n as i64);
    (n * a.unit_cost(inst.eta) + groups * a.fixed_cost(inst.eta)) / n
}

/// Builds the cost table for iteration `n + 1` from the routes and schedule
/// of iteration `n`. `history` holds earlier iterations.
#[allow(clippy::too_many_arguments)]
pub fn modify_costs<S: Scalar>(
    inst: &Instance<S>,
    n: usize,
    routes: &FixedRoutes,
    sol: &PlatoonSolution,
    adm: &[AdmissibleArcs<S>],
    whole: &[TimeBounds],
    history: &CostHistory<S>,
    mode: CostMode,
) -> CostUpdate<S> {
    let net = &inst.network;
    let eta = inst.eta;
    // Arc -> (vehicle, entry window at the tail along its route).
    let mut drivers: HashMap<usize, Vec<(usize, (i64, i64))>> = HashMap::new();
    for (v, p) in routes.paths.iter().enumerate() {
        for (pos, &k) in p.iter().enumerate() {
            drivers.entry(k).or_default().push((v, routes.entry_window(inst, v, pos)));
        }
    }
    // (vehicle, arc) -> number of vehicles entering with it.
    let mut bundle: HashMap<(usize, usize), usize> = HashMap::new();
    let current = compositions(inst, sol);
    for (&k, sets) in &current {
        for vs in sets {
            for &v in vs {
                bundle.insert((v, k), vs.len());
            }
        }
    }
    let q = inst.q_effective();
    let mut table = CostTable::empty(n + 1);
    let mut scenarios = HashMap::new();
    let mut fallbacks = 0;
    for a in adm {
        let v = a.vehicle;
        for &k in &a.arcs {
            let arc = net.arc(k);
            let (unit, fixed) = (arc.unit_cost(eta), arc.fixed_cost(eta));
            let Some(others) = drivers.get(&k) else {
                table.set(v, k, ArcCost::Split { unit, fixed });
                continue;
            };
            if let Some(&size) = bundle.get(&(v, k)) {
                table.set(v, k, ArcCost::Single(realized_cost(inst, k, size)));
                scenarios.insert((v, k), Scenario::Realized);
                continue;
            }
            match repeated_cost(history, n, v, k, &current) {
                Some(Some(cost)) => {
                    let cost = match cost {
                        ArcCost::Split { unit, fixed } => unit + fixed,
                        ArcCost::Single(c) => c,
                    };
                    table.set(v, k, ArcCost::Single(cost));
                    scenarios.insert((v, k), Scenario::Repeated);
                    continue;
                }
                Some(None) => {
                    log::debug!("no earlier cost for vehicle {v} on arc {k}; using the standard rule");
                    fallbacks += 1;
                }
                None => {}
            }
            let reach = whole[v].window(arc.tail);
            let meeting = others
                .iter()
                .filter(|(u, (lo, hi))| *u != v && reach.is_some_and(|(vlo, vhi)| vlo.max(*lo) <= vhi.min(*hi)))
                .count();
            let (scenario, cost) = match (meeting, mode) {
                (0, CostMode::Icmp) => (Scenario::Unreachable, unit + fixed),
                (0, CostMode::Llcmp) => (Scenario::Unreachable, unit),
                (m, CostMode::Icmp) => {
                    let share = S::from_int(q.min(1 + m) as i64);
                    (Scenario::Reachable, unit + fixed / share)
                }
                (_, CostMode::Llcmp) => (Scenario::Reachable, unit),
            };
            table.set(v, k, ArcCost::Single(cost));
            scenarios.insert((v, k), scenario);
        }
    }
    CostUpdate { table, scenarios, fallbacks }
}

/// `None` when the repeated-composition rule does not apply; `Some(None)`
/// when it applies but the earlier cost is unknown.
fn repeated_cost<S: Scalar>(
    history: &CostHistory<S>,
    n: usize,
    v: usize,
    arc: usize,
    current: &Compositions,
) -> Option<Option<ArcCost<S>>> {
    let sets = current.get(&arc)?;
    for (&k, comp) in history.compositions.range(..n) {
        if k + 2 > n {
            break;
        }
        let Some(earlier) = comp.get(&arc) else { continue };
        let lured = history.scenarios.get(&(k + 1)).and_then(|s| s.get(&(v, arc))) == Some(&Scenario::Reachable);
        if lured && sets.iter().any(|g| !g.contains(&v) && earlier.contains(g)) {
            return Some(history.tables.get(&(k + 2)).and_then(|t| t.get(v, arc)));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::QLimit;
    use crate::network::{Arc, RoadNetwork};
    use crate::instance::Instance;
    use num_rational::Rational64;

    fn one_arc(q: QLimit) -> Instance<Rational64> {
        let net = RoadNetwork::new(2, vec![Arc::new(0, 1, Rational64::from_int(1), 1)]).unwrap();
        Instance::new(net, vec![], Rational64::new(1, 10), q, 1.0, 10).unwrap()
    }

    #[test]
    fn realized_costs_match_worked_examples() {
        let inst = one_arc(QLimit::Limited(5));
        assert_eq!(realized_cost(&inst, 0, 1), Rational64::from_int(1));
        assert_eq!(realized_cost(&inst, 0, 2), Rational64::new(95, 100));
        assert_eq!(realized_cost(&inst, 0, 5), Rational64::new(92, 100));
        // Seven vehicles with a limit of five need two platoons.
        assert_eq!(realized_cost(&inst, 0, 7), Rational64::new(65, 7 * 10));
    }
}
