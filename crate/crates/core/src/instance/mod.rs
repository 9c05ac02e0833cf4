//! Fleets, global parameters and time windows.

mod bounds;
mod example;
mod generate;
mod io;

pub use bounds::{node_time_bounds, path_time_bounds, BoundsMode, TimeBounds};
pub use example::six_node_example;
pub use generate::{generate_fleet, FleetParams, OdMode};
pub use io::{load_instance, parse_instance, save_instance, write_instance};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{all_pairs_shortest_times, RoadNetwork, TravelTimeMatrix};
use crate::scalar::Scalar;

/// Maximum number of vehicles in one platoon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QLimit {
    Limited(usize),
    Unlimited,
}

impl QLimit {
    /// The limit as a count, with `Unlimited` capped at the fleet size.
    pub fn effective(self, fleet: usize) -> usize {
        match self {
            QLimit::Limited(q) => q,
            QLimit::Unlimited => fleet.max(1),
        }
    }

    /// Number of platoons needed for `n` vehicles sharing an arc and time.
    pub fn platoons(self, n: usize) -> usize {
        match self {
            QLimit::Limited(q) => n.div_ceil(q),
            QLimit::Unlimited => usize::from(n > 0),
        }
    }

    pub fn admits(self, n: usize) -> bool {
        match self {
            QLimit::Limited(q) => n <= q,
            QLimit::Unlimited => true,
        }
    }
}

impl std::fmt::Display for QLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QLimit::Limited(q) => write!(f, "{q}"),
            QLimit::Unlimited => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vehicle {
    pub id: usize,
    pub origin: usize,
    pub dest: usize,
    /// Earliest departure from the origin, in time units.
    pub earliest: i64,
    /// Latest arrival at the destination, in time units.
    pub latest: i64,
}

impl Vehicle {
    pub fn budget(&self) -> i64 {
        self.latest - self.earliest
    }
}

#[derive(Debug, Clone)]
pub struct Instance<S> {
    pub network: RoadNetwork<S>,
    pub vehicles: Vec<Vehicle>,
    pub eta: S,
    pub q: QLimit,
    /// Minutes represented by one time unit.
    pub time_unit: f64,
    pub horizon: i64,
    st: TravelTimeMatrix,
}

impl<S: Scalar> PartialEq for Instance<S> {
    fn eq(&self, other: &Self) -> bool {
        self.network == other.network
            && self.vehicles == other.vehicles
            && self.eta == other.eta
            && self.q == other.q
            && self.time_unit == other.time_unit
            && self.horizon == other.horizon
    }
}

impl<S: Scalar> Instance<S> {
    pub fn new(
        network: RoadNetwork<S>,
        vehicles: Vec<Vehicle>,
        eta: S,
        q: QLimit,
        time_unit: f64,
        horizon: i64,
    ) -> Result<Self> {
        if eta < S::zero() || eta >= S::one() {
            return Err(Error::Validation(format!("eta {eta} outside [0, 1)")));
        }
        if let QLimit::Limited(q) = q {
            if q < 2 {
                return Err(Error::Validation(format!("platoon limit {q} < 2")));
            }
        }
        if time_unit.is_nan() || time_unit <= 0.0 {
            return Err(Error::Validation(format!("time unit {time_unit} must be positive")));
        }
        let st = all_pairs_shortest_times(&network);
        for (k, v) in vehicles.iter().enumerate() {
            if v.id != k {
                return Err(Error::Validation(format!("vehicle ids must be dense, found {} at {k}", v.id)));
            }
            let n = network.num_nodes();
            if v.origin >= n || v.dest >= n || v.origin == v.dest {
                return Err(Error::Validation(format!("vehicle {k} has invalid OD ({}, {})", v.origin, v.dest)));
            }
            if v.earliest > v.latest {
                return Err(Error::Validation(format!("vehicle {k} window [{}, {}] is inverted", v.earliest, v.latest)));
            }
            match st.get(v.origin, v.dest) {
                Some(t) if t <= v.budget() => {}
                _ => return Err(Error::EmptyPathSet { vehicle: k }),
            }
        }
        Ok(Instance { network, vehicles, eta, q, time_unit, horizon, st })
    }

    pub fn travel_times(&self) -> &TravelTimeMatrix {
        &self.st
    }

    pub fn num_vehicles(&self) -> usize {
        self.vehicles.len()
    }

    /// Platoon limit as a count for this fleet.
    pub fn q_effective(&self) -> usize {
        self.q.effective(self.vehicles.len())
    }

    /// Copy with a different set of vehicle windows (same ids and ODs).
    pub fn with_vehicles(&self, vehicles: Vec<Vehicle>) -> Result<Self> {
        Self::new(self.network.clone(), vehicles, self.eta, self.q, self.time_unit, self.horizon)
    }

    /// Same data with costs converted to `f64`.
    pub fn to_f64(&self) -> Instance<f64> {
        Instance {
            network: self.network.map_costs(|c| c.to_f64()),
            vehicles: self.vehicles.clone(),
            eta: self.eta.to_f64(),
            q: self.q,
            time_unit: self.time_unit,
            horizon: self.horizon,
            st: self.st.clone(),
        }
    }
}
