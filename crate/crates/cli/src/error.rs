use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown experiment `{0}` (see --list)")]
    UnknownExperiment(String),
    #[error("bad parameter `{key}`: {reason}")]
    BadParam { key: String, reason: String },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("simulation failed: {0}")]
    Simulation(#[from] qxsim_core::Error),
    #[error("could not encode output: {0}")]
    Encode(String),
}

impl CliError {
    pub(crate) fn bad_param(key: &str, reason: impl Into<String>) -> Self {
        CliError::BadParam { key: key.to_string(), reason: reason.into() }
    }

    /// Process exit status: 2 for caller mistakes, 3 for everything that fails later.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownExperiment(_) | CliError::BadParam { .. } => 2,
            _ => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
