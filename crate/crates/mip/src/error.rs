use thiserror::Error;

#[derive(Debug, Error)]
pub enum MipError {
    #[error("invalid model: {0}")]
    ModelInvalid(String),
    #[error("the LP relaxation is infeasible")]
    Infeasible,
    #[error("the objective is unbounded")]
    Unbounded,
    #[error("LP engine failure: {0}")]
    Engine(String),
    #[error("time limit reached before the relaxation was solved")]
    Interrupted,
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = MipError> = std::result::Result<T, E>;
