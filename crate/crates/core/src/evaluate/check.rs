use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::evaluate::PlatoonSolution;
use crate::instance::Instance;
use crate::scalar::Scalar;

/// Slack allowed on every time comparison.
pub const TIME_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UnknownVehicle,
    MissingRoute,
    DuplicateRoute,
    EmptyRoute,
    WrongOrigin,
    WrongDestination,
    Disconnected,
    RepeatedNode,
    UnknownArc,
    NonFiniteTime,
    EarlyDeparture,
    TravelTime,
    LateArrival,
    EmptyPlatoon,
    LeaderNotSmallest,
    PlatoonTooLarge,
    DuplicateMember,
    NotOnArc,
    EntryMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub vehicle: Option<usize>,
    pub arc: Option<(usize, usize)>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, vehicle: Option<usize>, arc: Option<(usize, usize)>, kind: ViolationKind) {
        self.violations.push(Violation { vehicle, arc, kind });
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{:?}", v.kind)?;
            if let Some(id) = v.vehicle {
                write!(f, " vehicle {id}")?;
            }
            if let Some((i, j)) = v.arc {
                write!(f, " arc ({i}, {j})")?;
            }
        }
        Ok(())
    }
}

/// Verifies routes, timing and platoon structure against the instance.
pub fn check<S: Scalar>(inst: &Instance<S>, sol: &PlatoonSolution) -> ValidationReport {
    use ViolationKind::*;
    let net = &inst.network;
    let tol = TIME_TOLERANCE;
    let mut rep = ValidationReport::default();
    let mut seen = vec![false; inst.num_vehicles()];
    // (vehicle, tail, head) -> entry time for traversed arcs.
    let mut entries: HashMap<(usize, usize, usize), f64> = HashMap::new();

    for r in &sol.routes {
        let v = r.vehicle;
        if v >= inst.num_vehicles() {
            rep.push(Some(v), None, UnknownVehicle);
            continue;
        }
        if std::mem::replace(&mut seen[v], true) {
            rep.push(Some(v), None, DuplicateRoute);
            continue;
        }
        let veh = &inst.vehicles[v];
        let (Some(first), Some(last)) = (r.arcs.first(), r.arcs.last()) else {
            rep.push(Some(v), None, EmptyRoute);
            continue;
        };
        if first.tail != veh.origin {
            rep.push(Some(v), Some((first.tail, first.head)), WrongOrigin);
        }
        if last.head != veh.dest {
            rep.push(Some(v), Some((last.tail, last.head)), WrongDestination);
        }
        let mut visited = HashSet::from([first.tail]);
        let mut prev: Option<(usize, f64, i64)> = None;
        for (idx, a) in r.arcs.iter().enumerate() {
            let key = Some((a.tail, a.head));
            if !visited.insert(a.head) {
                rep.push(Some(v), key, RepeatedNode);
            }
            let time = match net.find_arc(a.tail, a.head) {
                Some(k) => Some(net.arc(k).time),
                None => {
                    rep.push(Some(v), key, UnknownArc);
                    None
                }
            };
            if !a.entry.is_finite() {
                rep.push(Some(v), key, NonFiniteTime);
                prev = None;
                continue;
            }
            if idx == 0 && a.entry < veh.earliest as f64 - tol {
                rep.push(Some(v), key, EarlyDeparture);
            }
            if let Some((head, entry, t)) = prev {
                if head != a.tail {
                    rep.push(Some(v), key, Disconnected);
                }
                if a.entry < entry + t as f64 - tol {
                    rep.push(Some(v), key, TravelTime);
                }
            }
            entries.insert((v, a.tail, a.head), a.entry);
            prev = time.map(|t| (a.head, a.entry, t));
        }
        if let Some((_, entry, t)) = prev {
            if entry + t as f64 > veh.latest as f64 + tol {
                rep.push(Some(v), Some((last.tail, last.head)), LateArrival);
            }
        }
    }
    for (v, s) in seen.iter().enumerate() {
        if !s {
            rep.push(Some(v), None, MissingRoute);
        }
    }

    let mut grouped: HashSet<(usize, usize, usize)> = HashSet::new();
    for p in &sol.platoons {
        let key = Some((p.tail, p.head));
        if net.find_arc(p.tail, p.head).is_none() {
            rep.push(None, key, UnknownArc);
        }
        let Some(&min) = p.members.iter().min() else {
            rep.push(None, key, EmptyPlatoon);
            continue;
        };
        if p.leader != min {
            rep.push(Some(p.leader), key, LeaderNotSmallest);
        }
        if !inst.q.admits(p.members.len()) {
            rep.push(Some(p.leader), key, PlatoonTooLarge);
        }
        if !p.entry.is_finite() {
            rep.push(Some(p.leader), key, NonFiniteTime);
        }
        for &m in &p.members {
            if !grouped.insert((m, p.tail, p.head)) {
                rep.push(Some(m), key, DuplicateMember);
                continue;
            }
            match entries.get(&(m, p.tail, p.head)) {
                None => rep.push(Some(m), key, NotOnArc),
                Some(&t) if (t - p.entry).abs() > tol => rep.push(Some(m), key, EntryMismatch),
                Some(_) => {}
            }
        }
    }
    rep
}
