use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsMode<'a> {
    WholeGraph,
    /// Along a fixed path, given as arc indices from origin to destination.
    Path(&'a [usize]),
}

/// Earliest and latest entry time of one vehicle at each node. Nodes the
/// vehicle cannot visit on time have no window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimeBounds {
    pub vehicle: usize,
    pub lo: Vec<Option<i64>>,
    pub hi: Vec<Option<i64>>,
}

impl TimeBounds {
    /// `Some((lo, hi))` when the node is reachable and `lo <= hi`.
    pub fn window(&self, node: usize) -> Option<(i64, i64)> {
        match (self.lo[node], self.hi[node]) {
            (Some(lo), Some(hi)) if lo <= hi => Some((lo, hi)),
            _ => None,
        }
    }

    /// Like [`TimeBounds::window`] but reports why a node is excluded.
    pub fn require(&self, node: usize) -> Result<(i64, i64)> {
        match (self.lo[node], self.hi[node]) {
            (Some(lo), Some(hi)) if lo <= hi => Ok((lo, hi)),
            (lo, hi) => Err(Error::InfeasibleNode {
                vehicle: self.vehicle,
                node,
                lo: lo.unwrap_or(i64::MAX),
                hi: hi.unwrap_or(i64::MIN),
            }),
        }
    }

    pub fn contains(&self, node: usize, t: i64) -> bool {
        self.window(node).is_some_and(|(lo, hi)| lo <= t && t <= hi)
    }
}

pub fn node_time_bounds<S: Scalar>(inst: &Instance<S>, vehicle: usize, mode: BoundsMode<'_>) -> Result<TimeBounds> {
    match mode {
        BoundsMode::WholeGraph => {
            let v = &inst.vehicles[vehicle];
            let st = inst.travel_times();
            let n = inst.network.num_nodes();
            Ok(TimeBounds {
                vehicle,
                lo: (0..n).map(|i| st.get(v.origin, i).map(|t| v.earliest + t)).collect(),
                hi: (0..n).map(|i| st.get(i, v.dest).map(|t| v.latest - t)).collect(),
            })
        }
        BoundsMode::Path(path) => path_time_bounds(inst, vehicle, path),
    }
}

/// Bounds using travel times along `path` only; nodes off the path get no
/// window. The path must be a simple origin-destination path.
pub fn path_time_bounds<S: Scalar>(inst: &Instance<S>, vehicle: usize, path: &[usize]) -> Result<TimeBounds> {
    let v = &inst.vehicles[vehicle];
    let net = &inst.network;
    let n = net.num_nodes();
    let mut seen = vec![false; n];
    let mut node = v.origin;
    seen[node] = true;
    for &k in path {
        let a = net.arc(k);
        if a.tail != node || seen[a.head] {
            return Err(Error::Validation(format!("route of vehicle {vehicle} is not a simple path")));
        }
        node = a.head;
        seen[node] = true;
    }
    if node != v.dest || path.is_empty() {
        return Err(Error::Validation(format!("route of vehicle {vehicle} does not end at its destination")));
    }
    let total = net.path_time(path);
    let mut lo = vec![None; n];
    let mut hi = vec![None; n];
    let mut elapsed = 0;
    lo[v.origin] = Some(v.earliest);
    hi[v.origin] = Some(v.latest - total);
    for &k in path {
        let a = net.arc(k);
        elapsed += a.time;
        lo[a.head] = Some(v.earliest + elapsed);
        hi[a.head] = Some(v.latest - (total - elapsed));
    }
    Ok(TimeBounds { vehicle, lo, hi })
}
