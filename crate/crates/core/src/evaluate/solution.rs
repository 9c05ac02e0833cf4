use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instance::QLimit;

/// One arc of a route with the time the vehicle enters it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimedArc {
    pub tail: usize,
    pub head: usize,
    pub entry: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleRoute {
    pub vehicle: usize,
    pub arcs: Vec<TimedArc>,
}

/// Vehicles entering an arc together. The leader saves nothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Platoon {
    pub tail: usize,
    pub head: usize,
    pub entry: f64,
    pub leader: usize,
    pub members: Vec<usize>,
}

/// Timed routes plus platoons. Vehicles not listed in any platoon on an arc
/// drive it alone.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PlatoonSolution {
    pub routes: Vec<VehicleRoute>,
    pub platoons: Vec<Platoon>,
}

impl PlatoonSolution {
    /// Groups vehicles that enter the same arc at the same time into chunks
    /// of at most `q`, in ascending id order. Singletons are not recorded.
    pub fn from_routes(mut routes: Vec<VehicleRoute>, q: QLimit) -> Self {
        routes.sort_by_key(|r| r.vehicle);
        let mut together: BTreeMap<(usize, usize, u64), Vec<usize>> = BTreeMap::new();
        for r in &routes {
            for a in &r.arcs {
                together.entry((a.tail, a.head, a.entry.to_bits())).or_default().push(r.vehicle);
            }
        }
        let mut platoons = Vec::new();
        for ((tail, head, bits), mut vehicles) in together {
            if vehicles.len() < 2 {
                continue;
            }
            vehicles.sort_unstable();
            let size = q.effective(vehicles.len());
            for chunk in vehicles.chunks(size) {
                if chunk.len() > 1 {
                    platoons.push(Platoon { tail, head, entry: f64::from_bits(bits), leader: chunk[0], members: chunk.to_vec() });
                }
            }
        }
        PlatoonSolution { routes, platoons }
    }

    pub fn route(&self, vehicle: usize) -> Option<&VehicleRoute> {
        self.routes.iter().find(|r| r.vehicle == vehicle)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse { line: e.line(), message: e.to_string() })
    }
}
