use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable, malformed or invalid configuration, or bad arguments.
    #[error("config error: {0}")]
    Config(String),

    /// An output could not be written.
    #[error("io error: {0}")]
    Io(String),

    /// A computation failed or a check did not pass.
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Check(_) => 1,
        }
    }
}

impl From<phlo_core::Error> for CliError {
    fn from(e: phlo_core::Error) -> Self {
        match e {
            phlo_core::Error::Config(m) => CliError::Config(m),
            other => CliError::Check(other.to_string()),
        }
    }
}
