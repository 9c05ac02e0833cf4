use crate::instance::{Instance, QLimit, Vehicle};
use crate::network::RoadNetwork;
use crate::scalar::Scalar;

/// Six-node, three-truck example. Nodes are numbered from 0 (node `k` here is
/// node `k + 1` in the usual drawing). One time unit is 0.01 minutes, so arc
/// lengths of 1, 0.99 and 1.5 minutes become 100, 99 and 150 units and clock
/// times are minutes after midnight times 100.
pub fn six_node_example<S: Scalar>() -> Instance<S> {
    let one = S::one();
    let edges = [
        (0, 1, one, 100),
        (1, 4, one, 100),
        (2, 3, one, 100),
        (1, 2, one, 100),
        (0, 2, one, 100),
        (3, 5, one, 100),
        (4, 5, S::from_ratio(99, 100), 99),
        (4, 3, one, 100),
        (2, 4, S::from_ratio(3, 2), 150),
    ];
    let network = RoadNetwork::undirected(6, &edges).expect("example network is valid");
    let hour = 60 * 100;
    let vehicles = vec![
        Vehicle { id: 0, origin: 0, dest: 1, earliest: 14 * hour, latest: 15 * hour },
        Vehicle { id: 1, origin: 0, dest: 2, earliest: 19 * hour, latest: 20 * hour },
        Vehicle { id: 2, origin: 0, dest: 5, earliest: 19 * hour, latest: 24 * hour },
    ];
    Instance::new(network, vehicles, S::from_ratio(1, 10), QLimit::Limited(2), 0.01, 24 * hour)
        .expect("example instance is valid")
}
