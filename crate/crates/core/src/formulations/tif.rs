use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use platoon_mip::{MipModel, ObjectiveSense, Sense, VarId};

use crate::error::{Error, Result};
use crate::evaluate::{TimedArc, VehicleRoute};
use crate::formulations::FixedRoutes;
use crate::instance::Instance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TifVariant {
    #[default]
    Exact,
    /// No platoon size limit; the arc-time indicator is binary. Solutions
    /// must be repaired into platoons of the real size.
    Relaxed,
}

/// Which route arcs can possibly be shared.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed<S> {
    /// Per vehicle, per route position.
    pub kept: Vec<Vec<bool>>,
    /// Fixed cost of every kept `(vehicle, arc)`.
    pub kept_fixed: S,
    /// Fixed cost of the excluded pairs, paid in full.
    pub excluded_fixed: S,
}

impl<S> Preprocessed<S> {
    pub fn num_kept(&self) -> usize {
        self.kept.iter().map(|k| k.iter().filter(|&&b| b).count()).sum()
    }
}

/// Keeps `(v, arc)` when another vehicle's route uses the arc and their entry
/// windows at its tail intersect.
pub fn scheduling_preprocess<S: Scalar>(inst: &Instance<S>, routes: &FixedRoutes) -> Preprocessed<S> {
    let net = &inst.network;
    let mut on_arc: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (v, p) in routes.paths.iter().enumerate() {
        for (pos, &k) in p.iter().enumerate() {
            on_arc.entry(k).or_default().push((v, pos));
        }
    }
    let mut kept: Vec<Vec<bool>> = routes.paths.iter().map(|p| vec![false; p.len()]).collect();
    let (mut kept_fixed, mut excluded_fixed) = (S::zero(), S::zero());
    for (v, p) in routes.paths.iter().enumerate() {
        for (pos, &k) in p.iter().enumerate() {
            let (lo, hi) = routes.entry_window(inst, v, pos);
            let shared = on_arc[&k].iter().any(|&(u, upos)| {
                let (ulo, uhi) = routes.entry_window(inst, u, upos);
                u != v && lo.max(ulo) <= hi.min(uhi)
            });
            let f = net.arc(k).fixed_cost(inst.eta);
            if shared {
                kept[v][pos] = true;
                kept_fixed = kept_fixed + f;
            } else {
                excluded_fixed = excluded_fixed + f;
            }
        }
    }
    Preprocessed { kept, kept_fixed, excluded_fixed }
}

/// Entry times worth considering at each node: departures, propagated
/// along the routes without waiting. A schedule can always be shifted onto
/// these points without losing any platoon.
fn entry_grid<S: Scalar>(inst: &Instance<S>, routes: &FixedRoutes) -> Vec<BTreeSet<i64>> {
    let net = &inst.network;
    let mut next: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (v, p) in routes.paths.iter().enumerate() {
        for &k in p {
            next.entry(net.arc(k).tail).or_default().push((v, k));
        }
    }
    let mut grid = vec![BTreeSet::new(); net.num_nodes()];
    let mut queue = VecDeque::new();
    for v in &inst.vehicles {
        if grid[v.origin].insert(v.earliest) {
            queue.push_back((v.origin, v.earliest));
        }
    }
    while let Some((i, t)) = queue.pop_front() {
        for &(v, k) in next.get(&i).map_or(&[][..], Vec::as_slice) {
            let a = net.arc(k);
            let b = &routes.bounds[v];
            let end = t + a.time;
            if b.contains(i, t) && b.window(a.head).is_some_and(|(_, hi)| end <= hi) && grid[a.head].insert(end) {
                queue.push_back((a.head, end));
            }
        }
    }
    grid
}

/// Time-indexed scheduling model on fixed routes. The objective is the
/// fixed cost saved by platooning, maximized.
#[derive(Debug, Clone)]
pub struct TifModel<S> {
    pub model: MipModel,
    pub routes: FixedRoutes,
    pub pre: Preprocessed<S>,
    pub variant: TifVariant,
    /// Per vehicle, per route position: `(entry time, var)`; empty when the
    /// position was excluded.
    pub x: Vec<Vec<Vec<(i64, VarId)>>>,
    /// `(arc, time)` -> number of platoons.
    pub y: BTreeMap<(usize, i64), VarId>,
}

pub fn build_tif<S: Scalar>(inst: &Instance<S>, routes: FixedRoutes, variant: TifVariant) -> Result<TifModel<S>> {
    let net = &inst.network;
    let pre = scheduling_preprocess(inst, &routes);
    let grid = entry_grid(inst, &routes);
    let mut m = MipModel::new("tif");
    let mut x: Vec<Vec<Vec<(i64, VarId)>>> = routes.paths.iter().map(|p| vec![Vec::new(); p.len()]).collect();
    let mut users: BTreeMap<(usize, i64), Vec<VarId>> = BTreeMap::new();

    for (v, p) in routes.paths.iter().enumerate() {
        let mut prev: Option<usize> = None;
        for (pos, &k) in p.iter().enumerate() {
            if !pre.kept[v][pos] {
                continue;
            }
            let a = net.arc(k);
            let (lo, hi) = routes.entry_window(inst, v, pos);
            let times: Vec<i64> = grid[a.tail].range(lo..=hi).copied().collect();
            if times.is_empty() {
                return Err(Error::EmptyEntrySet { vehicle: v, node: a.tail });
            }
            let mut assign = Vec::with_capacity(times.len());
            for &t in &times {
                let var = m.add_binary(format!("x_{}_{}_{}_{}", a.tail, a.head, t, v));
                users.entry((k, t)).or_default().push(var);
                x[v][pos].push((t, var));
                assign.push((var, 1.0));
            }
            m.add_constraint(format!("assign_{}_{}_{}", a.tail, a.head, v), assign, Sense::Eq, 1.0);
            if let Some(pp) = prev {
                // Entering this arc by time s requires entering the earlier
                // kept arc by s - lag.
                let lag: i64 = p[pp..pos].iter().map(|&kk| net.arc(kk).time).sum();
                let earlier = &x[v][pp];
                for &(s, _) in &x[v][pos] {
                    let before: Vec<(VarId, f64)> =
                        earlier.iter().filter(|(t, _)| *t <= s - lag).map(|&(_, var)| (var, 1.0)).collect();
                    if before.len() == earlier.len() {
                        continue;
                    }
                    let mut terms = before;
                    terms.extend(x[v][pos].iter().filter(|(t, _)| *t <= s).map(|&(_, var)| (var, -1.0)));
                    m.add_constraint(format!("prec_{}_{}_{}_{}", a.tail, a.head, s, v), terms, Sense::Ge, 0.0);
                }
            }
            prev = Some(pos);
        }
    }

    let q = inst.q_effective();
    let mut y = BTreeMap::new();
    for ((k, t), xs) in users {
        let a = net.arc(k);
        let upper = match variant {
            TifVariant::Exact => inst.q.platoons(xs.len()),
            TifVariant::Relaxed => 1,
        };
        let yv = m.add_integer(format!("y_{}_{}_{}", a.tail, a.head, t), 0.0, upper as f64);
        m.add_objective_term(yv, -a.fixed_cost(inst.eta).to_f64());
        for (n, &xv) in xs.iter().enumerate() {
            m.add_constraint(format!("link_{}_{}_{}_{n}", a.tail, a.head, t), vec![(xv, 1.0), (yv, -1.0)], Sense::Le, 0.0);
        }
        if variant == TifVariant::Exact && xs.len() > q {
            let mut terms: Vec<(VarId, f64)> = xs.iter().map(|&xv| (xv, 1.0)).collect();
            terms.push((yv, -(q as f64)));
            m.add_constraint(format!("cap_{}_{}_{}", a.tail, a.head, t), terms, Sense::Le, 0.0);
        }
        y.insert((k, t), yv);
    }
    m.objective.sense = ObjectiveSense::Maximize;
    m.objective.constant = pre.kept_fixed.to_f64();
    Ok(TifModel { model: m, routes, pre, variant, x, y })
}

impl<S: Scalar> TifModel<S> {
    /// Every kept arc entered as early as possible.
    pub fn earliest_hint(&self, inst: &Instance<S>) -> Vec<f64> {
        let mut values = vec![0.0; self.model.num_vars()];
        let mut count: HashMap<(usize, i64), usize> = HashMap::new();
        for (v, positions) in self.x.iter().enumerate() {
            for (pos, vars) in positions.iter().enumerate() {
                if let Some(&(t, var)) = vars.first() {
                    values[var.index()] = 1.0;
                    *count.entry((self.routes.paths[v][pos], t)).or_default() += 1;
                }
            }
        }
        for (key, n) in count {
            let groups = match self.variant {
                TifVariant::Exact => inst.q.platoons(n),
                TifVariant::Relaxed => 1,
            };
            values[self.y[&key].index()] = groups as f64;
        }
        values
    }

    /// Timed routes: kept arcs at their chosen times, the others as early as
    /// the preceding arcs allow.
    pub fn schedule(&self, inst: &Instance<S>, values: &[f64]) -> Result<Vec<VehicleRoute>> {
        let net = &inst.network;
        let mut out = Vec::with_capacity(self.routes.num_vehicles());
        for (v, p) in self.routes.paths.iter().enumerate() {
            let mut cursor = inst.vehicles[v].earliest;
            let mut arcs = Vec::with_capacity(p.len());
            for (pos, &k) in p.iter().enumerate() {
                let a = net.arc(k);
                let mut entry = cursor;
                if self.pre.kept[v][pos] {
                    let chosen = self.x[v][pos].iter().find(|(_, var)| values[var.index()] > 0.5);
                    let &(t, _) = chosen.ok_or_else(|| Error::DecodeInconsistent(format!("vehicle {v} has no entry time at position {pos}")))?;
                    if t < cursor {
                        return Err(Error::DecodeInconsistent(format!("vehicle {v} enters position {pos} before arriving")));
                    }
                    entry = t;
                }
                arcs.push(TimedArc { tail: a.tail, head: a.head, entry: entry as f64 });
                cursor = entry + a.time;
            }
            out.push(VehicleRoute { vehicle: v, arcs });
        }
        Ok(out)
    }
}
