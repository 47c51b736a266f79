use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parameter error: {0}")]
    Params(String),
    #[error("solver configuration error: {0}")]
    Config(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Params(_) => 2,
            CliError::Config(_) => 3,
            CliError::Certification(_) => 4,
            CliError::Io(_) => 1,
        })
    }
}

impl From<fkpp::Error> for CliError {
    fn from(e: fkpp::Error) -> Self {
        use fkpp::Error as E;
        match e {
            E::InvalidParams(_) | E::Domain(_) => CliError::Params(e.to_string()),
            E::Certification(_) => CliError::Certification(e.to_string()),
            E::Config(_) | E::InitialData(_) | E::NoConvergence { .. } | E::StepUnderflow { .. } => {
                CliError::Config(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
