use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::network::RoadNetwork;
use crate::scalar::Scalar;

/// Shortest travel times between every ordered node pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TravelTimeMatrix {
    n: usize,
    st: Vec<i64>,
}

const UNREACHABLE: i64 = i64::MAX;

impl TravelTimeMatrix {
    /// `None` when `j` cannot be reached from `i`.
    pub fn get(&self, i: usize, j: usize) -> Option<i64> {
        let v = self.st[i * self.n + j];
        (v != UNREACHABLE).then_some(v)
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> Vec<Option<i64>> {
        (0..self.n).map(|j| self.get(i, j)).collect()
    }
}

/// Dijkstra from `source` on travel times.
pub fn shortest_times_from<S: Scalar>(net: &RoadNetwork<S>, source: usize) -> Vec<Option<i64>> {
    let mut dist = vec![UNREACHABLE; net.num_nodes()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0;
    heap.push(Reverse((0i64, source)));
    while let Some(Reverse((d, i))) = heap.pop() {
        if d > dist[i] {
            continue;
        }
        for &k in net.out_arcs(i) {
            let a = net.arc(k);
            let nd = d + a.time;
            if nd < dist[a.head] {
                dist[a.head] = nd;
                heap.push(Reverse((nd, a.head)));
            }
        }
    }
    dist.into_iter().map(|d| (d != UNREACHABLE).then_some(d)).collect()
}

pub fn all_pairs_shortest_times<S: Scalar>(net: &RoadNetwork<S>) -> TravelTimeMatrix {
    let n = net.num_nodes();
    let mut st = Vec::with_capacity(n * n);
    for i in 0..n {
        st.extend(shortest_times_from(net, i).into_iter().map(|d| d.unwrap_or(UNREACHABLE)));
    }
    TravelTimeMatrix { n, st }
}

struct ByCost<S>(S, usize);

impl<S: PartialOrd> PartialEq for ByCost<S> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<S: PartialOrd> Eq for ByCost<S> {}
impl<S: PartialOrd> PartialOrd for ByCost<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<S: PartialOrd> Ord for ByCost<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed so the max-heap pops the cheapest label.
        other.0.partial_cmp(&self.0).unwrap_or(Ordering::Equal).then(other.1.cmp(&self.1))
    }
}

/// Cheapest cost from `source` to every node (or to `source` from every
/// node when `reverse`), using only arcs for which `allowed` holds.
pub fn cheapest_costs<S: Scalar>(
    net: &RoadNetwork<S>,
    source: usize,
    reverse: bool,
    allowed: impl Fn(usize) -> bool,
) -> Vec<Option<S>> {
    let mut dist: Vec<Option<S>> = vec![None; net.num_nodes()];
    let mut done = vec![false; net.num_nodes()];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(S::zero());
    heap.push(ByCost(S::zero(), source));
    while let Some(ByCost(d, i)) = heap.pop() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let arcs = if reverse { net.in_arcs(i) } else { net.out_arcs(i) };
        for &k in arcs {
            if !allowed(k) {
                continue;
            }
            let a = net.arc(k);
            let j = if reverse { a.tail } else { a.head };
            let nd = d + a.cost;
            if dist[j].is_none_or(|cur| nd < cur) {
                dist[j] = Some(nd);
                heap.push(ByCost(nd, j));
            }
        }
    }
    dist
}

struct Label<S> {
    node: usize,
    cost: S,
    time: i64,
    arc: Option<usize>,
    parent: usize,
}

/// Cheapest `origin -> dest` path whose travel time fits in `budget`.
///
/// Label setting over (cost, time) pairs, expanded in order of time; labels
/// that cannot reach `dest` within the budget are dropped using `st`.
/// Returns the cost and the arc list.
pub fn cheapest_feasible_path<S: Scalar>(
    net: &RoadNetwork<S>,
    origin: usize,
    dest: usize,
    budget: i64,
    time_to_dest: &[Option<i64>],
    allowed: impl Fn(usize) -> bool,
) -> Option<(S, Vec<usize>)> {
    if time_to_dest[origin].is_none_or(|t| t > budget) {
        return None;
    }
    let mut labels = vec![Label { node: origin, cost: S::zero(), time: 0, arc: None, parent: usize::MAX }];
    // Per node, accepted labels; a new label must not be weakly dominated.
    let mut front: Vec<Vec<usize>> = vec![Vec::new(); net.num_nodes()];
    front[origin].push(0);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0i64, 0usize)));
    let mut best: Option<usize> = None;
    while let Some(Reverse((_, id))) = heap.pop() {
        let (node, cost, time) = (labels[id].node, labels[id].cost, labels[id].time);
        if best.is_some_and(|b| labels[b].cost <= cost) {
            continue;
        }
        if node == dest {
            best = Some(id);
            continue;
        }
        for &k in net.out_arcs(node) {
            if !allowed(k) {
                continue;
            }
            let a = net.arc(k);
            let (nc, nt) = (cost + a.cost, time + a.time);
            if time_to_dest[a.head].is_none_or(|r| nt + r > budget) {
                continue;
            }
            if front[a.head].iter().any(|&l| labels[l].cost <= nc && labels[l].time <= nt) {
                continue;
            }
            let nid = labels.len();
            labels.push(Label { node: a.head, cost: nc, time: nt, arc: Some(k), parent: id });
            front[a.head].push(nid);
            heap.push(Reverse((nt, nid)));
        }
    }
    let best = best?;
    let mut path = Vec::new();
    let mut cur = best;
    while let Some(k) = labels[cur].arc {
        path.push(k);
        cur = labels[cur].parent;
    }
    path.reverse();
    Some((labels[best].cost, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Arc;

    fn diamond() -> RoadNetwork<f64> {
        // 0->1->3 cheap but slow, 0->2->3 expensive but fast.
        RoadNetwork::new(
            4,
            vec![Arc::new(0, 1, 1.0, 5), Arc::new(1, 3, 1.0, 5), Arc::new(0, 2, 4.0, 1), Arc::new(2, 3, 4.0, 1)],
        )
        .unwrap()
    }

    #[test]
    fn times_and_unreachable() {
        let st = all_pairs_shortest_times(&diamond());
        assert_eq!(st.get(0, 3), Some(2));
        assert_eq!(st.get(3, 0), None);
        assert_eq!(st.get(2, 2), Some(0));
    }

    #[test]
    fn budget_selects_path() {
        let net = diamond();
        let st = all_pairs_shortest_times(&net);
        let to_dest: Vec<_> = (0..4).map(|i| st.get(i, 3)).collect();
        let (c, p) = cheapest_feasible_path(&net, 0, 3, 10, &to_dest, |_| true).unwrap();
        assert_eq!((c, p.len()), (2.0, 2));
        assert_eq!(net.arc(p[0]).head, 1);
        let (c, _) = cheapest_feasible_path(&net, 0, 3, 9, &to_dest, |_| true).unwrap();
        assert_eq!(c, 8.0);
        assert!(cheapest_feasible_path(&net, 0, 3, 1, &to_dest, |_| true).is_none());
    }

    #[test]
    fn reverse_costs() {
        let net = diamond();
        let back = cheapest_costs(&net, 3, true, |_| true);
        assert_eq!(back, vec![Some(2.0), Some(1.0), Some(4.0), Some(0.0)]);
    }
}
