use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error(transparent)]
    Core(#[from] platoon_core::Error),
    #[error(transparent)]
    Mip(#[from] platoon_mip::MipError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 when no feasible plan exists or a plan fails its check, 2 for bad
    /// arguments or unreadable input.
    pub fn exit_code(&self) -> u8 {
        use platoon_core::Error as E;
        match self {
            CliError::Infeasible(_) => 1,
            CliError::Core(E::NoFeasibleSolution | E::InfeasibleVehicle { .. } | E::EmptyPathSet { .. }) => 1,
            CliError::Core(E::InvalidSolution(_) | E::DecodeInconsistent(_)) => 1,
            CliError::Mip(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
