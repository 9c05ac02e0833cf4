//! Joint route and schedule planning for truck platoons.
//!
//! Vehicles driving the same arc at the same time form a platoon; every
//! member except the leader saves a fraction `eta` of the arc cost. The crate
//! builds exact MIP formulations of the planning problem, a routing and
//! scheduling decomposition heuristic, a pairwise matching heuristic for
//! large fleets, and an independent checker for the resulting plans.

pub mod decomposition;
pub mod error;
pub mod evaluate;
pub mod formulations;
pub mod instance;
pub mod network;
pub mod pairwise;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_rational::Rational64;

/// Network with double precision costs.
pub type Network = network::RoadNetwork<f64>;
/// Network with exact rational costs.
pub type ExactNetwork = network::RoadNetwork<Rational64>;
pub type Instance64 = instance::Instance<f64>;
pub type Instance32 = instance::Instance<f32>;
pub type ExactInstance = instance::Instance<Rational64>;
