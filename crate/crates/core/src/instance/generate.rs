use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, QLimit, Vehicle};
use crate::network::RoadNetwork;
use crate::scalar::Scalar;

const MAX_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum OdMode {
    Uniform,
    /// With probability `share`, origin and destination are each drawn within
    /// `radius` time units of a uniformly chosen hub.
    HubWeighted { hubs: Vec<usize>, share: f64, radius: i64 },
}

impl OdMode {
    /// Hubs with the default share and a one-hour radius for `time_unit`.
    pub fn hubs(hubs: Vec<usize>, time_unit: f64) -> Self {
        OdMode::HubWeighted { hubs, share: 0.75, radius: (60.0 / time_unit).round() as i64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FleetParams<S> {
    pub eta: S,
    pub q: QLimit,
    pub time_unit: f64,
    pub horizon: i64,
    /// Allowed driving time as a multiple of the shortest travel time.
    pub window_factor: f64,
}

impl<S: Scalar> Default for FleetParams<S> {
    fn default() -> Self {
        FleetParams {
            eta: S::from_ratio(1, 10),
            q: QLimit::Limited(5),
            time_unit: 10.0,
            horizon: 144,
            window_factor: 1.2,
        }
    }
}

/// Draws `n` vehicles on `net`. Each gets a window of
/// `ceil(window_factor * st(O, D))` units starting uniformly in the first half
/// of the horizon (earlier if the trip would overrun it).
pub fn generate_fleet<S: Scalar>(
    net: &RoadNetwork<S>,
    n: usize,
    seed: u64,
    mode: &OdMode,
    params: &FleetParams<S>,
) -> Result<Instance<S>> {
    if n == 0 {
        return Err(Error::GenerationFailed("fleet size must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let st = crate::network::all_pairs_shortest_times(net);
    let nodes = net.num_nodes();
    let near: Vec<Vec<usize>> = match mode {
        OdMode::Uniform => Vec::new(),
        OdMode::HubWeighted { hubs, radius, .. } => {
            if hubs.is_empty() || hubs.iter().any(|&h| h >= nodes) {
                return Err(Error::GenerationFailed("hub list is empty or has unknown nodes".into()));
            }
            hubs.iter()
                .map(|&h| (0..nodes).filter(|&i| st.get(h, i).is_some_and(|t| t <= *radius)).collect())
                .collect()
        }
    };
    let mut vehicles = Vec::with_capacity(n);
    let mut attempts = 0;
    while vehicles.len() < n {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::GenerationFailed(format!("only {} of {n} vehicles after {MAX_ATTEMPTS} draws", vehicles.len())));
        }
        let (o, d) = match mode {
            OdMode::HubWeighted { share, .. } if rng.random_bool(share.clamp(0.0, 1.0)) => {
                let a = &near[rng.random_range(0..near.len())];
                let b = &near[rng.random_range(0..near.len())];
                (a[rng.random_range(0..a.len())], b[rng.random_range(0..b.len())])
            }
            _ => (rng.random_range(0..nodes), rng.random_range(0..nodes)),
        };
        if o == d {
            continue;
        }
        let Some(sp) = st.get(o, d) else { continue };
        let allowed = (params.window_factor * sp as f64 - 1e-9).ceil() as i64;
        let last_start = (params.horizon / 2).min(params.horizon - allowed);
        if last_start < 0 {
            continue;
        }
        let earliest = rng.random_range(0..=last_start);
        vehicles.push(Vehicle { id: vehicles.len(), origin: o, dest: d, earliest, latest: earliest + allowed });
    }
    Instance::new(net.clone(), vehicles, params.eta, params.q, params.time_unit, params.horizon)
}
