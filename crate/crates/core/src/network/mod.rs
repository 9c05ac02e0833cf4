//! Road networks, travel-time queries, arc pruning and time expansion.

mod graph;
mod grid;
pub(crate) mod io;
mod prune;
mod shortest;
mod time_space;

pub use graph::{Arc, RoadNetwork};
pub use grid::generate_grid;
pub use io::{load_network, parse_network, save_network, write_network};
pub use prune::{prune_arcs, AdmissibleArcs};
pub use shortest::{
    all_pairs_shortest_times, cheapest_costs, cheapest_feasible_path, shortest_times_from, TravelTimeMatrix,
};
pub use time_space::{build_time_space, TimeArc, TimeGridMode, TimeSpaceNetwork, TsArc};
