use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Directed road segment with a delivery cost and an integral travel time.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc<S> {
    pub tail: usize,
    pub head: usize,
    pub cost: S,
    pub time: i64,
}

impl<S: Scalar> Arc<S> {
    pub fn new(tail: usize, head: usize, cost: S, time: i64) -> Self {
        Arc { tail, head, cost, time }
    }

    /// Part of the cost paid once per platoon.
    pub fn fixed_cost(&self, eta: S) -> S {
        eta * self.cost
    }

    /// Part of the cost paid by every vehicle.
    pub fn unit_cost(&self, eta: S) -> S {
        (S::one() - eta) * self.cost
    }
}

/// Directed graph on nodes `0..num_nodes`. Arcs are kept sorted by
/// `(tail, head)`, so arc indices are stable for a given arc set.
#[derive(Debug, Clone)]
pub struct RoadNetwork<S> {
    num_nodes: usize,
    arcs: Vec<Arc<S>>,
    index: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl<S: Scalar> PartialEq for RoadNetwork<S> {
    fn eq(&self, other: &Self) -> bool {
        self.num_nodes == other.num_nodes && self.arcs == other.arcs
    }
}

impl<S: Scalar> RoadNetwork<S> {
    pub fn new(num_nodes: usize, mut arcs: Vec<Arc<S>>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::Validation("network has no arcs".into()));
        }
        arcs.sort_by_key(|a| (a.tail, a.head));
        let mut index = HashMap::with_capacity(arcs.len());
        let mut out = vec![Vec::new(); num_nodes];
        let mut inc = vec![Vec::new(); num_nodes];
        for (k, a) in arcs.iter().enumerate() {
            if a.tail >= num_nodes || a.head >= num_nodes {
                return Err(Error::Validation(format!("arc ({}, {}) uses an unknown node", a.tail, a.head)));
            }
            if a.tail == a.head {
                return Err(Error::Validation(format!("self-loop at node {}", a.tail)));
            }
            if a.cost < S::zero() {
                return Err(Error::Validation(format!("arc ({}, {}) has negative cost", a.tail, a.head)));
            }
            if a.time < 1 {
                return Err(Error::Validation(format!("arc ({}, {}) has travel time {} < 1", a.tail, a.head, a.time)));
            }
            if index.insert((a.tail, a.head), k).is_some() {
                return Err(Error::Validation(format!("duplicate arc ({}, {})", a.tail, a.head)));
            }
            out[a.tail].push(k);
            inc[a.head].push(k);
        }
        Ok(RoadNetwork { num_nodes, arcs, index, out, inc })
    }

    /// Builds a network with every edge present in both directions.
    pub fn undirected(num_nodes: usize, edges: &[(usize, usize, S, i64)]) -> Result<Self> {
        let arcs = edges
            .iter()
            .flat_map(|&(i, j, c, t)| [Arc::new(i, j, c, t), Arc::new(j, i, c, t)])
            .collect();
        Self::new(num_nodes, arcs)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc<S>] {
        &self.arcs
    }

    pub fn arc(&self, k: usize) -> &Arc<S> {
        &self.arcs[k]
    }

    pub fn find_arc(&self, tail: usize, head: usize) -> Option<usize> {
        self.index.get(&(tail, head)).copied()
    }

    pub fn out_arcs(&self, node: usize) -> &[usize] {
        &self.out[node]
    }

    pub fn in_arcs(&self, node: usize) -> &[usize] {
        &self.inc[node]
    }

    /// Sum of arc costs along a list of arc indices.
    pub fn path_cost(&self, path: &[usize]) -> S {
        path.iter().fold(S::zero(), |acc, &k| acc + self.arcs[k].cost)
    }

    pub fn path_time(&self, path: &[usize]) -> i64 {
        path.iter().map(|&k| self.arcs[k].time).sum()
    }

    /// Same topology and times with costs converted to another scalar type.
    pub fn map_costs<T: Scalar>(&self, f: impl Fn(S) -> T) -> RoadNetwork<T> {
        RoadNetwork {
            num_nodes: self.num_nodes,
            arcs: self.arcs.iter().map(|a| Arc::new(a.tail, a.head, f(a.cost), a.time)).collect(),
            index: self.index.clone(),
            out: self.out.clone(),
            inc: self.inc.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_invalid_arcs() {
        assert!(RoadNetwork::<f64>::new(2, vec![]).is_err());
        assert!(RoadNetwork::new(2, vec![Arc::new(0, 0, 1.0, 1)]).is_err());
        assert!(RoadNetwork::new(2, vec![Arc::new(0, 1, -1.0, 1)]).is_err());
        assert!(RoadNetwork::new(2, vec![Arc::new(0, 1, 1.0, 0)]).is_err());
        assert!(RoadNetwork::new(2, vec![Arc::new(0, 2, 1.0, 1)]).is_err());
        assert!(RoadNetwork::new(2, vec![Arc::new(0, 1, 1.0, 1), Arc::new(0, 1, 2.0, 1)]).is_err());
    }

    #[test]
    fn arcs_are_sorted_and_indexed() {
        let net = RoadNetwork::undirected(3, &[(1, 2, 1.0, 1), (0, 1, 2.0, 3)]).unwrap();
        let pairs: Vec<_> = net.arcs().iter().map(|a| (a.tail, a.head)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(net.find_arc(1, 2), Some(2));
        assert_eq!(net.out_arcs(1), &[1, 2]);
        assert_eq!(net.in_arcs(1), &[0, 3]);
    }

    #[test]
    fn cost_split_is_exact() {
        use num_rational::Rational64;
        let a = Arc::new(0, 1, Rational64::from_int(1), 1);
        let eta = Rational64::new(1, 10);
        assert_eq!(a.fixed_cost(eta), Rational64::new(1, 10));
        assert_eq!(a.unit_cost(eta), Rational64::new(9, 10));
        assert_eq!(a.fixed_cost(eta) + a.unit_cost(eta), a.cost);
    }
}
