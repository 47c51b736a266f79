use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("root finder failed to converge in [{lo}, {hi}]")]
    NoConvergence { lo: f64, hi: f64 },

    #[error("step size underflow at x = {x} (g = {g})")]
    StepUnderflow { x: f64, g: f64 },

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error("initial data rejected: {0}")]
    InitialData(String),

    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
