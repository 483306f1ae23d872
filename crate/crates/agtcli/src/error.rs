use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] agt_core::Error),
    #[error("invalid check spec: {0}")]
    InvalidSpec(String),
    #[error("no usable parameters after {attempts} seeds starting at {first_seed}: {last}")]
    DegenerateExhausted { first_seed: u64, attempts: u64, last: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: 2 for exhausted re-seeding, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::DegenerateExhausted { .. } => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
