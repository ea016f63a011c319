//! Error kinds and their exit codes.

use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The request is outside what the solvers support.
    #[error("capability: {0}")]
    Capability(String),
    /// Bad input: flags, files, games or data.
    #[error("invalid input: {0}")]
    Validation(String),
    /// A computation or output write failed.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Capability(_) => 2,
            CliError::Validation(_) => 3,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.code())
    }
}

impl From<msets::MsetsError> for CliError {
    fn from(e: msets::MsetsError) -> Self {
        match e {
            msets::MsetsError::Capability(m) => CliError::Capability(m),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<mu_eq::MuError> for CliError {
    fn from(e: mu_eq::MuError) -> Self {
        match e {
            mu_eq::MuError::Capability(m) => CliError::Capability(m),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<nash::NashError> for CliError {
    fn from(e: nash::NashError) -> Self {
        match e {
            nash::NashError::Capability(m) => CliError::Capability(m),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<qre::QreError> for CliError {
    fn from(e: qre::QreError) -> Self {
        match e {
            qre::QreError::NotApplicable(m) => CliError::Capability(m),
            qre::QreError::ContinuationFailure { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<elicitation::ElicitError> for CliError {
    fn from(e: elicitation::ElicitError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<analysis::AnalysisError> for CliError {
    fn from(e: analysis::AnalysisError) -> Self {
        match e {
            analysis::AnalysisError::Capability(m) => CliError::Capability(m),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<game_core::GameError> for CliError {
    fn from(e: game_core::GameError) -> Self {
        CliError::Validation(e.to_string())
    }
}
