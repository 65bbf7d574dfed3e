//! CLI error taxonomy mapped onto process exit codes.

use drier_core::ModelError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad or inconsistent configuration (exit 2).
    #[error("configuration error: {0}")]
    Config(String),

    /// Numerical failure during a run (exit 3).
    #[error("numerical error: {0}")]
    Numerics(ModelError),

    /// Filesystem trouble (exit 4).
    #[error("io error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerics(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            // Construction-time complaints are configuration problems; only
            // runtime breakdowns count as numerical failures.
            ModelError::Diverged { .. } | ModelError::SingularState(_) | ModelError::NoControl(_) => {
                CliError::Numerics(e)
            }
            ModelError::Io(msg) => CliError::Io(msg),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
