use thiserror::Error;

use platoon_mip::MipError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid data: {0}")]
    Validation(String),
    #[error("vehicle {vehicle}: no time-feasible path from origin to destination")]
    EmptyPathSet { vehicle: usize },
    #[error("time {time} exceeds the horizon {horizon}")]
    HorizonExceeded { time: i64, horizon: i64 },
    #[error("vehicle {vehicle} cannot visit node {node}: earliest {lo} > latest {hi}")]
    InfeasibleNode { vehicle: usize, node: usize, lo: i64, hi: i64 },
    #[error("instance generation failed: {0}")]
    GenerationFailed(String),
    #[error("vehicle {vehicle} has no admissible route")]
    InfeasibleVehicle { vehicle: usize },
    #[error("no cost for vehicle {vehicle} on arc ({tail}, {head})")]
    MissingCost { vehicle: usize, tail: usize, head: usize },
    #[error("vehicle {vehicle} has no feasible entry time at node {node}")]
    EmptyEntrySet { vehicle: usize, node: usize },
    #[error("shrinking the window of vehicle {vehicle} leaves [{earliest}, {latest}]")]
    ShrinkInfeasible { vehicle: usize, earliest: i64, latest: i64 },
    #[error("decoded solution is inconsistent: {0}")]
    DecodeInconsistent(String),
    #[error("solution is invalid: {0}")]
    InvalidSolution(String),
    #[error("indicator undefined: {0} is zero")]
    DivisionDomain(&'static str),
    #[error("no feasible solution found")]
    NoFeasibleSolution,
    #[error(transparent)]
    Mip(#[from] MipError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
