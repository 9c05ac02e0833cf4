//! Brute-force oracles and seeded instance families shared by the
//! integration tests. Nothing here uses the MIP layer.

#![allow(dead_code)]

use std::collections::HashMap;

use platoon_core::instance::{Instance, QLimit, Vehicle};
use platoon_core::network::{Arc, RoadNetwork};
use platoon_core::{ExactInstance, Rational64, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random strongly connected digraph on 4-7 nodes (a Hamiltonian cycle plus
/// extra arcs), integral costs 1-4 and travel times 1-2, 2-5 vehicles with
/// 0-3 units of slack, and a platoon limit of 2, 3 or unlimited.
pub fn small_instance(seed: u64) -> ExactInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = rng.random_range(4..=7usize);
        let mut pairs = std::collections::BTreeSet::new();
        for i in 0..n {
            pairs.insert((i, (i + 1) % n));
        }
        let extra = rng.random_range(n..=2 * n);
        for _ in 0..extra {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            if i != j {
                pairs.insert((i, j));
            }
        }
        let arcs = pairs
            .into_iter()
            .map(|(i, j)| Arc::new(i, j, Rational64::from_int(rng.random_range(1..=4)), rng.random_range(1..=2)))
            .collect();
        let net = RoadNetwork::new(n, arcs).unwrap();
        let st = platoon_core::network::all_pairs_shortest_times(&net);
        let nv = rng.random_range(2..=5usize);
        // Shared origins make platoons likely.
        let hub = rng.random_range(0..n);
        let mut vehicles = Vec::new();
        while vehicles.len() < nv {
            let o = if rng.random_bool(0.6) { hub } else { rng.random_range(0..n) };
            let d = rng.random_range(0..n);
            if o == d {
                continue;
            }
            let earliest = rng.random_range(0..=2);
            let latest = earliest + st.get(o, d).unwrap() + rng.random_range(0..=3);
            vehicles.push(Vehicle { id: vehicles.len(), origin: o, dest: d, earliest, latest });
        }
        let q = match rng.random_range(0..3) {
            0 => QLimit::Limited(2),
            1 => QLimit::Limited(3),
            _ => QLimit::Unlimited,
        };
        let horizon = vehicles.iter().map(|v| v.latest).max().unwrap();
        if let Ok(inst) = Instance::new(net, vehicles, Rational64::new(1, 10), q, 1.0, horizon) {
            return inst;
        }
    }
}

/// Per vehicle, `(arc, entry)` pairs in driving order.
pub type Plan = Vec<Vec<(usize, i64)>>;

/// Every simple origin-destination path with every integral entry-time
/// sequence that fits the vehicle's window: `(arc, entry)` lists.
pub fn timed_paths<S: Scalar>(inst: &Instance<S>, v: usize) -> Vec<Vec<(usize, i64)>> {
    let net = &inst.network;
    let veh = &inst.vehicles[v];
    let mut out = Vec::new();
    let mut visited = vec![false; net.num_nodes()];
    visited[veh.origin] = true;
    fn dfs<S: Scalar>(
        net: &RoadNetwork<S>,
        veh: &Vehicle,
        node: usize,
        ready: i64,
        visited: &mut Vec<bool>,
        cur: &mut Vec<(usize, i64)>,
        out: &mut Vec<Vec<(usize, i64)>>,
    ) {
        if node == veh.dest {
            out.push(cur.clone());
            return;
        }
        for &k in net.out_arcs(node) {
            let a = net.arc(k);
            if visited[a.head] {
                continue;
            }
            visited[a.head] = true;
            for entry in ready..=veh.latest - a.time {
                cur.push((k, entry));
                dfs(net, veh, a.head, entry + a.time, visited, cur, out);
                cur.pop();
            }
            visited[a.head] = false;
        }
    }
    dfs(net, veh, veh.origin, veh.earliest, &mut visited, &mut Vec::new(), &mut out);
    out
}

/// Cost of a joint plan where each `(arc, time)` bundle of `n` vehicles forms
/// `ceil(n / Q)` platoons.
fn bundle_cost<S: Scalar>(inst: &Instance<S>, counts: &HashMap<(usize, i64), usize>) -> S {
    let mut total = S::zero();
    for (&(k, _), &n) in counts {
        let c = inst.network.arc(k).cost;
        let groups = inst.q.platoons(n) as i64;
        total = total + S::from_int(n as i64) * c - S::from_int(n as i64 - groups) * inst.eta * c;
    }
    total
}

/// Exact optimum over all joint timed simple paths, by depth-first search
/// with a per-vehicle lower bound. Returns the cost and one optimal plan.
pub fn tpp_optimum<S: Scalar>(inst: &Instance<S>) -> (S, Plan) {
    let options: Vec<Vec<Vec<(usize, i64)>>> = (0..inst.num_vehicles()).map(|v| timed_paths(inst, v)).collect();
    let floor: Vec<S> = options
        .iter()
        .map(|opts| {
            opts.iter()
                .map(|p| p.iter().fold(S::zero(), |acc, &(k, _)| acc + inst.network.arc(k).unit_cost(inst.eta)))
                .fold(None, |m: Option<S>, c| Some(m.map_or(c, |m| m.min_of(c))))
                .expect("vehicle has a timed path")
        })
        .collect();
    let mut best: Option<(S, Plan)> = None;
    let mut counts = HashMap::new();
    let mut chosen = Vec::new();
    search(inst, &options, &floor, 0, &mut counts, &mut chosen, &mut best);
    best.expect("some plan exists")
}

fn search<S: Scalar>(
    inst: &Instance<S>,
    options: &[Vec<Vec<(usize, i64)>>],
    floor: &[S],
    v: usize,
    counts: &mut HashMap<(usize, i64), usize>,
    chosen: &mut Vec<Vec<(usize, i64)>>,
    best: &mut Option<(S, Plan)>,
) {
    let partial = bundle_cost(inst, counts);
    let rest = floor[v..].iter().fold(S::zero(), |a, &b| a + b);
    if best.as_ref().is_some_and(|(b, _)| partial + rest >= *b) {
        return;
    }
    if v == options.len() {
        *best = Some((partial, chosen.clone()));
        return;
    }
    for p in &options[v] {
        for &(k, t) in p {
            *counts.entry((k, t)).or_default() += 1;
        }
        chosen.push(p.clone());
        search(inst, options, floor, v + 1, counts, chosen, best);
        chosen.pop();
        for &(k, t) in p {
            let c = counts.get_mut(&(k, t)).unwrap();
            *c -= 1;
            if *c == 0 {
                counts.remove(&(k, t));
            }
        }
    }
}

/// Cheapest schedule of fixed routes over every integral entry-time tuple.
pub fn schedule_optimum<S: Scalar>(inst: &Instance<S>, paths: &[Vec<usize>]) -> S {
    let per_vehicle: Vec<Vec<Vec<(usize, i64)>>> = paths
        .iter()
        .enumerate()
        .map(|(v, p)| {
            let veh = &inst.vehicles[v];
            let mut out = Vec::new();
            fn rec<S: Scalar>(
                inst: &Instance<S>,
                p: &[usize],
                latest: i64,
                ready: i64,
                cur: &mut Vec<(usize, i64)>,
                out: &mut Vec<Vec<(usize, i64)>>,
            ) {
                let Some((&k, rest)) = p.split_first() else {
                    out.push(cur.clone());
                    return;
                };
                let remaining: i64 = p.iter().map(|&a| inst.network.arc(a).time).sum();
                for entry in ready..=latest - remaining {
                    cur.push((k, entry));
                    rec(inst, rest, latest, entry + inst.network.arc(k).time, cur, out);
                    cur.pop();
                }
            }
            rec(inst, p, veh.latest, veh.earliest, &mut Vec::new(), &mut out);
            out
        })
        .collect();
    let mut best: Option<S> = None;
    let mut idx = vec![0usize; paths.len()];
    loop {
        let mut counts = HashMap::new();
        for (v, &i) in idx.iter().enumerate() {
            for &(k, t) in &per_vehicle[v][i] {
                *counts.entry((k, t)).or_default() += 1;
            }
        }
        let c = bundle_cost(inst, &counts);
        best = Some(best.map_or(c, |b: S| b.min_of(c)));
        let mut v = 0;
        loop {
            if v == idx.len() {
                return best.unwrap();
            }
            idx[v] += 1;
            if idx[v] < per_vehicle[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

/// Every simple path from `o` to `d` as `(arc list, total time)`.
pub fn simple_paths<S: Scalar>(net: &RoadNetwork<S>, o: usize, d: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut visited = vec![false; net.num_nodes()];
    fn dfs<S: Scalar>(
        net: &RoadNetwork<S>,
        node: usize,
        d: usize,
        visited: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, i64)>,
    ) {
        if node == d {
            out.push((cur.clone(), net.path_time(cur)));
            return;
        }
        visited[node] = true;
        for &k in net.out_arcs(node) {
            let h = net.arc(k).head;
            if !visited[h] {
                cur.push(k);
                dfs(net, h, d, visited, cur, out);
                cur.pop();
            }
        }
        visited[node] = false;
    }
    dfs(net, o, d, &mut visited, &mut Vec::new(), &mut out);
    out
}

/// Fixed-route micro instance: 2-3 vehicles sharing parts of a small line
/// network, each with at most six entry times at every node.
pub fn micro_schedule(seed: u64) -> (ExactInstance, Vec<Vec<usize>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Path 0-1-2-3-4 plus side nodes 5 and 6 feeding into it.
    let mut arcs = Vec::new();
    for i in 0..4 {
        arcs.push(Arc::new(i, i + 1, Rational64::from_int(rng.random_range(1..=4)), rng.random_range(1..=2)));
    }
    arcs.push(Arc::new(5, 1, Rational64::from_int(rng.random_range(1..=3)), rng.random_range(1..=2)));
    arcs.push(Arc::new(6, 2, Rational64::from_int(rng.random_range(1..=3)), rng.random_range(1..=2)));
    arcs.push(Arc::new(4, 0, Rational64::from_int(1), 1));
    let net = RoadNetwork::new(7, arcs).unwrap();
    let nv = rng.random_range(2..=3usize);
    let starts = [0usize, 5, 6];
    let mut vehicles = Vec::new();
    let mut paths = Vec::new();
    for id in 0..nv {
        let o = starts[rng.random_range(0..3)];
        let first_line = match o {
            0 => 0,
            5 => 1,
            _ => 2,
        };
        let d = rng.random_range(first_line + 1..=4);
        let mut path = Vec::new();
        if o != 0 {
            path.push(net.find_arc(o, first_line).unwrap());
        }
        for i in first_line..d {
            path.push(net.find_arc(i, i + 1).unwrap());
        }
        let earliest = rng.random_range(0..=3);
        let latest = earliest + net.path_time(&path) + rng.random_range(0..=5);
        vehicles.push(Vehicle { id, origin: o, dest: d, earliest, latest });
        paths.push(path);
    }
    let q = if rng.random_bool(0.5) { QLimit::Limited(2) } else { QLimit::Unlimited };
    let horizon = vehicles.iter().map(|v| v.latest).max().unwrap();
    let inst = Instance::new(net, vehicles, Rational64::new(1, 10), q, 1.0, horizon).unwrap();
    (inst, paths)
}

/// Thin wrappers running each exact model to optimality and decoding it.
pub mod exact {
    use platoon_core::evaluate::{decode_cpf, decode_tif, decode_tsf, PlatoonSolution};
    use platoon_core::formulations::{build_cpf, build_tif, build_tsf, FixedRoutes, TifVariant};
    use platoon_core::instance::Instance;
    use platoon_core::network::{build_time_space, TimeGridMode};
    use platoon_core::Scalar;
    use platoon_mip::{solve, MipConfig, MipResult, MipStatus};

    fn optimal(res: MipResult) -> MipResult {
        assert_eq!(res.status, MipStatus::Optimal);
        res
    }

    pub fn cpf<S: Scalar>(inst: &Instance<S>) -> (PlatoonSolution, f64) {
        let m = build_cpf(inst).unwrap();
        let res = optimal(solve(&m.model, &MipConfig::default()).unwrap());
        (decode_cpf(inst, &m, &res).unwrap(), res.objective)
    }

    pub fn tsf<S: Scalar>(inst: &Instance<S>) -> (PlatoonSolution, f64) {
        let tsn = build_time_space(inst, TimeGridMode::EventClosure).unwrap();
        let m = build_tsf(inst, tsn).unwrap();
        let res = optimal(solve(&m.model, &MipConfig::default()).unwrap());
        (decode_tsf(inst, &m, &res).unwrap(), res.objective)
    }

    /// Optimal schedule of fixed routes and its savings objective.
    pub fn tif<S: Scalar>(inst: &Instance<S>, paths: Vec<Vec<usize>>) -> (PlatoonSolution, f64) {
        let routes = FixedRoutes::new(inst, paths).unwrap();
        let m = build_tif(inst, routes, TifVariant::Exact).unwrap();
        let res = optimal(solve(&m.model, &MipConfig::default()).unwrap());
        (decode_tif(inst, &m, &res).unwrap(), res.objective)
    }
}
