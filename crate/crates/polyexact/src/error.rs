use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{module}: {msg}")]
    Domain { module: &'static str, msg: String },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{module}: infeasible: {msg}")]
    Infeasible { module: &'static str, msg: String },
    #[error("{module}: scale guard exceeded: {msg}")]
    Resource { module: &'static str, msg: String },
}

impl Error {
    pub fn domain(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { module, msg: msg.into() }
    }

    pub fn infeasible(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Infeasible { module, msg: msg.into() }
    }

    pub fn resource(module: &'static str, msg: impl Into<String>) -> Self {
        Error::Resource { module, msg: msg.into() }
    }

    /// True for errors that the command line reports with the parse exit code.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
