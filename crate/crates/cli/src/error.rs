use nuradial_core::Error as CoreError;
use thiserror::Error;

/// Failures surfaced by the CLI, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config file or parameter values.
    #[error("{0}")]
    Config(String),
    /// The inputs are valid but admit no physical result.
    #[error("{0}")]
    NoPhysicalResult(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Internal(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_PHYSICAL: i32 = 3;
pub const EXIT_VALIDATION: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::NoPhysicalResult(_) => EXIT_NO_PHYSICAL,
            CliError::Io(_) | CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::InvalidInput(_) | CoreError::UnknownPreset(_) | CoreError::Domain(_) => CliError::Config(msg),
            CoreError::NoStructure
            | CoreError::NoBranch(_)
            | CoreError::ComplexIndex(_)
            | CoreError::SingularBranch { .. }
            | CoreError::NonNormalizable(_) => CliError::NoPhysicalResult(msg),
            CoreError::Degenerate(_)
            | CoreError::InvalidK { .. }
            | CoreError::UnsupportedSigma
            | CoreError::Integration { .. }
            | CoreError::Oracle(_) => CliError::Internal(msg),
        }
    }
}
