use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("no crossing in range [{lo}, {hi}]: lowest-level gap has the same sign at both ends")]
    NoCrossing { lo: f64, hi: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, ChainError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(ChainError::Domain(msg.into()))
}
