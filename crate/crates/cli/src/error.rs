use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or parameter values.
    #[error("configuration error: {0}")]
    Config(String),
    /// Missing or malformed input data.
    #[error("data error: {0}")]
    Data(String),
    /// Anything that fails while a run is in progress.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl From<parafis_core::Error> for CliError {
    fn from(e: parafis_core::Error) -> Self {
        use parafis_core::Error as E;
        match e {
            E::InvalidParameter(_) => CliError::Config(e.to_string()),
            E::Parse { .. } | E::Stream(_) | E::Csv(_) | E::UnknownClass { .. } => {
                CliError::Data(e.to_string())
            }
            E::DimensionMismatch { .. } => CliError::Data(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
