use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("config validation failed:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("unknown suite {name:?}; available: {}", available.join(", "))]
    UnknownSuite { name: String, available: Vec<String> },
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] muskat_core::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Failure = 1,
    Validation = 2,
    BlowUp = 3,
    SuspectDivergent = 4,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s.code())
    }
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Parse(_) | CliError::Validation(_) | CliError::UnknownSuite { .. } => Status::Validation,
            CliError::Core(muskat_core::Error::InvalidParameter(_) | muskat_core::Error::InvalidSize(_)) => Status::Validation,
            _ => Status::Failure,
        }
    }
}
