use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::instance::{node_time_bounds, BoundsMode, Instance, TimeBounds};
use crate::network::{prune_arcs, AdmissibleArcs};
use crate::scalar::Scalar;

/// Which time points are expanded at each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimeGridMode {
    /// Every integer time in `0..=horizon`.
    Full,
    /// Times reachable by driving without waiting from some vehicle's
    /// departure, plus each destination's deadline. Any plan can be shifted
    /// onto these points without raising its cost: a platoon whose members
    /// all waited before it can leave one unit earlier, and merging two
    /// platoons never needs more platoons in total.
    #[default]
    EventClosure,
}

/// Move from `(tail, start)` to `(head, start + T)` along road arc `arc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TsArc {
    pub arc: usize,
    pub tail: usize,
    pub head: usize,
    pub start: i64,
}

/// Waiting at `node` from `from` to the next expanded time `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeArc {
    pub node: usize,
    pub from: i64,
    pub to: i64,
}

#[derive(Debug, Clone)]
pub struct TimeSpaceNetwork<S> {
    pub mode: TimeGridMode,
    /// Sorted expanded times per physical node.
    pub grid: Vec<Vec<i64>>,
    pub ts_arcs: Vec<TsArc>,
    pub time_arcs: Vec<TimeArc>,
    /// Per road arc: cost paid once per platoon and cost paid per vehicle.
    pub fixed_cost: Vec<S>,
    pub unit_cost: Vec<S>,
    pub bounds: Vec<TimeBounds>,
    pub admissible: Vec<AdmissibleArcs<S>>,
}

impl<S: Scalar> TimeSpaceNetwork<S> {
    /// Whether vehicle `v` may take a move arc.
    pub fn vehicle_may_move(&self, v: usize, a: &TsArc, travel: i64) -> bool {
        let b = &self.bounds[v];
        self.admissible[v].contains(a.arc)
            && b.contains(a.tail, a.start)
            && b.window(a.head).is_some_and(|(_, hi)| a.start + travel <= hi)
    }

    pub fn vehicle_may_wait(&self, v: usize, w: &TimeArc) -> bool {
        self.bounds[v].window(w.node).is_some_and(|(lo, hi)| lo <= w.from && w.to <= hi)
    }

    pub fn num_ts_nodes(&self) -> usize {
        self.grid.iter().map(Vec::len).sum()
    }

    /// Dense index of every expanded `(node, time)` pair.
    pub fn node_index(&self) -> HashMap<(usize, i64), usize> {
        let mut map = HashMap::with_capacity(self.num_ts_nodes());
        for (i, times) in self.grid.iter().enumerate() {
            for &t in times {
                let id = map.len();
                map.insert((i, t), id);
            }
        }
        map
    }
}

pub fn build_time_space<S: Scalar>(inst: &Instance<S>, mode: TimeGridMode) -> Result<TimeSpaceNetwork<S>> {
    let net = &inst.network;
    let n = net.num_nodes();
    for v in &inst.vehicles {
        if v.latest > inst.horizon {
            return Err(Error::HorizonExceeded { time: v.latest, horizon: inst.horizon });
        }
    }
    let mut bounds = Vec::with_capacity(inst.num_vehicles());
    let mut admissible = Vec::with_capacity(inst.num_vehicles());
    for v in &inst.vehicles {
        bounds.push(node_time_bounds(inst, v.id, BoundsMode::WholeGraph)?);
        admissible.push(prune_arcs(net, v, inst.travel_times(), inst.eta)?);
    }
    let mut points: Vec<BTreeSet<i64>> = vec![BTreeSet::new(); n];
    let mut ts_arcs = Vec::new();
    match mode {
        TimeGridMode::Full => {
            for p in points.iter_mut() {
                p.extend(0..=inst.horizon);
            }
            for (k, a) in net.arcs().iter().enumerate() {
                for start in 0..=inst.horizon - a.time {
                    ts_arcs.push(TsArc { arc: k, tail: a.tail, head: a.head, start });
                }
            }
        }
        TimeGridMode::EventClosure => {
            let users: Vec<Vec<usize>> = (0..net.num_arcs())
                .map(|k| (0..inst.num_vehicles()).filter(|&v| admissible[v].contains(k)).collect())
                .collect();
            let mut queue = VecDeque::new();
            for v in &inst.vehicles {
                if points[v.origin].insert(v.earliest) {
                    queue.push_back((v.origin, v.earliest));
                }
            }
            while let Some((i, t)) = queue.pop_front() {
                for &k in net.out_arcs(i) {
                    let a = net.arc(k);
                    let end = t + a.time;
                    let used = users[k].iter().any(|&v| {
                        bounds[v].contains(i, t) && bounds[v].window(a.head).is_some_and(|(_, hi)| end <= hi)
                    });
                    if !used {
                        continue;
                    }
                    ts_arcs.push(TsArc { arc: k, tail: i, head: a.head, start: t });
                    if points[a.head].insert(end) {
                        queue.push_back((a.head, end));
                    }
                }
            }
            // Deadlines are sinks only; adding them earlier would stop the
            // closure from expanding a departure that lands on one.
            for v in &inst.vehicles {
                points[v.dest].insert(v.latest);
            }
            ts_arcs.sort_by_key(|a| (a.arc, a.start));
        }
    }
    let grid: Vec<Vec<i64>> = points.into_iter().map(|p| p.into_iter().collect()).collect();
    let time_arcs = grid
        .iter()
        .enumerate()
        .flat_map(|(node, times)| times.windows(2).map(move |w| TimeArc { node, from: w[0], to: w[1] }))
        .collect();
    Ok(TimeSpaceNetwork {
        mode,
        grid,
        ts_arcs,
        time_arcs,
        fixed_cost: net.arcs().iter().map(|a| a.fixed_cost(inst.eta)).collect(),
        unit_cost: net.arcs().iter().map(|a| a.unit_cost(inst.eta)).collect(),
        bounds,
        admissible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{QLimit, Vehicle};
    use crate::network::{Arc, RoadNetwork};

    fn single_arc(horizon: i64) -> Instance<f64> {
        let net = RoadNetwork::new(2, vec![Arc::new(0, 1, 1.0, 2)]).unwrap();
        let v = Vehicle { id: 0, origin: 0, dest: 1, earliest: 0, latest: horizon.max(2) };
        Instance::new(net, vec![v], 0.1, QLimit::Limited(2), 1.0, horizon).unwrap()
    }

    #[test]
    fn full_grid_enumerates_every_start() {
        let tsn = build_time_space(&single_arc(4), TimeGridMode::Full).unwrap();
        let starts: Vec<_> = tsn.ts_arcs.iter().map(|a| (a.start, a.start + 2)).collect();
        assert_eq!(starts, vec![(0, 2), (1, 3), (2, 4)]);
        assert_eq!(tsn.time_arcs.len(), 8);
        assert!((tsn.fixed_cost[0] - 0.1).abs() < 1e-12 && (tsn.unit_cost[0] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn horizon_is_enforced() {
        assert!(matches!(
            build_time_space(&single_arc(1), TimeGridMode::Full),
            Err(Error::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn closure_expands_only_departure_events() {
        let tsn = build_time_space(&single_arc(4), TimeGridMode::EventClosure).unwrap();
        assert_eq!(tsn.grid, vec![vec![0], vec![2, 4]]);
        assert_eq!(tsn.ts_arcs.len(), 1);
    }

    #[test]
    fn departure_landing_on_a_deadline_is_expanded() {
        // Vehicle 0 ends at node 1 at time 2, exactly when vehicle 1 passes.
        let net = RoadNetwork::new(3, vec![Arc::new(0, 1, 1.0, 2), Arc::new(1, 2, 1.0, 1)]).unwrap();
        let vs = vec![
            Vehicle { id: 0, origin: 0, dest: 1, earliest: 0, latest: 2 },
            Vehicle { id: 1, origin: 0, dest: 2, earliest: 0, latest: 3 },
        ];
        let inst = Instance::new(net, vs, 0.1, QLimit::Limited(2), 1.0, 3).unwrap();
        let tsn = build_time_space(&inst, TimeGridMode::EventClosure).unwrap();
        assert_eq!(tsn.grid, vec![vec![0], vec![2], vec![3]]);
        assert_eq!(tsn.ts_arcs.len(), 2);
    }
}
