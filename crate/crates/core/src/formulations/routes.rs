use crate::error::Result;
use crate::instance::{path_time_bounds, Instance, TimeBounds};
use crate::scalar::Scalar;

/// One fixed origin-destination path per vehicle with the entry windows it
/// implies.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedRoutes {
    /// Per vehicle: arc indices from origin to destination.
    pub paths: Vec<Vec<usize>>,
    /// Per vehicle: bounds computed along its own path.
    pub bounds: Vec<TimeBounds>,
}

impl FixedRoutes {
    pub fn new<S: Scalar>(inst: &Instance<S>, paths: Vec<Vec<usize>>) -> Result<Self> {
        let bounds = paths
            .iter()
            .enumerate()
            .map(|(v, p)| path_time_bounds(inst, v, p))
            .collect::<Result<Vec<_>>>()?;
        for (v, b) in bounds.iter().enumerate() {
            let origin = inst.vehicles[v].origin;
            if b.window(origin).is_none() {
                return Err(crate::Error::EmptyEntrySet { vehicle: v, node: origin });
            }
        }
        Ok(FixedRoutes { paths, bounds })
    }

    /// Builds routes from `(tail, head)` node pairs.
    pub fn from_node_pairs<S: Scalar>(inst: &Instance<S>, paths: &[Vec<(usize, usize)>]) -> Result<Self> {
        let net = &inst.network;
        let arcs = paths
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&(i, j)| {
                        net.find_arc(i, j).ok_or_else(|| crate::Error::Validation(format!("no arc ({i}, {j})")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(inst, arcs)
    }

    pub fn num_vehicles(&self) -> usize {
        self.paths.len()
    }

    /// Entry window of vehicle `v` at the tail of the arc at position `pos`.
    pub fn entry_window<S: Scalar>(&self, inst: &Instance<S>, v: usize, pos: usize) -> (i64, i64) {
        let tail = inst.network.arc(self.paths[v][pos]).tail;
        self.bounds[v].window(tail).expect("path bounds cover every path node")
    }

    pub fn cost<S: Scalar>(&self, inst: &Instance<S>) -> S {
        self.paths.iter().fold(S::zero(), |acc, p| acc + inst.network.path_cost(p))
    }
}
