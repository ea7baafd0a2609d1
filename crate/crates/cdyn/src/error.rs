use std::process::ExitCode;

use cdyn_core::Error;

/// Everything that can stop a command, each with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Numerical(#[from] Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("check failed: {0}")]
    Assertion(String),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    /// 0 ok, 2 parse, 3 numerical, 4 exceptional basepoint, 5 resonance,
    /// 6 not a self-map.
    pub fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Io(_) | CliError::Assertion(_) => 3,
            CliError::Numerical(e) => match e {
                Error::InvalidInput(_) | Error::DegreeZero | Error::DegreeTooSmall(_) => 2,
                Error::ExceptionalBasepoint => 4,
                Error::SmallDenominator { .. } | Error::ResonantMultiplier { .. } => 5,
                Error::NotASelfMap { .. } => 6,
                _ => 3,
            },
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}
