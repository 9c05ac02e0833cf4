use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::RoadNetwork;
use crate::scalar::Scalar;

/// `rows x cols` grid with 4-neighbour edges in both directions. Each edge
/// gets one length drawn uniformly from {3, 4, 5}, used as cost and time.
/// Node `(r, c)` has id `r * cols + c`.
pub fn generate_grid<S: Scalar>(rows: usize, cols: usize, seed: u64) -> RoadNetwork<S> {
    assert!(rows >= 2 && cols >= 2, "grid needs at least 2 rows and 2 columns");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let id = r * cols + c;
            if c + 1 < cols {
                let len: i64 = rng.random_range(3..=5);
                edges.push((id, id + 1, S::from_int(len), len));
            }
            if r + 1 < rows {
                let len: i64 = rng.random_range(3..=5);
                edges.push((id, id + cols, S::from_int(len), len));
            }
        }
    }
    RoadNetwork::undirected(rows * cols, &edges).expect("grid is a valid network")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_symmetry() {
        let net: RoadNetwork<f64> = generate_grid(10, 10, 2);
        assert_eq!((net.num_nodes(), net.num_arcs()), (100, 360));
        let small: RoadNetwork<f64> = generate_grid(2, 2, 0);
        assert_eq!((small.num_nodes(), small.num_arcs()), (4, 8));
        for a in net.arcs() {
            let back = net.arc(net.find_arc(a.head, a.tail).unwrap());
            assert_eq!((back.cost, back.time), (a.cost, a.time));
            assert!((3..=5).contains(&a.time) && a.cost == a.time as f64);
        }
    }

    #[test]
    fn seeded() {
        let a: RoadNetwork<f64> = generate_grid(4, 3, 7);
        assert_eq!(a, generate_grid(4, 3, 7));
        assert_ne!(a, generate_grid(4, 3, 8));
    }
}
