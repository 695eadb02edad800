//! Error categories mapped onto process exit codes.
//!
//! The three failure classes keep scripting simple: `2` means the run never
//! started (bad configuration), `3` means an input could not be read or
//! parsed, `4` means the computation itself failed.

use curtail_core::curtailment::CurtailmentError;
use curtail_core::ingest::IngestError;
use curtail_core::stackelberg::StackelbergError;
use curtail_core::windmodel::WindModelError;

#[derive(Debug)]
pub enum RunError {
    /// Invalid or inconsistent configuration (exit 2).
    Config(String),
    /// Missing or malformed input data, or an I/O failure (exit 3).
    Data(String),
    /// A numerical routine failed on valid inputs (exit 4).
    Numeric(String),
}

impl RunError {
    pub fn code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Data(_) => 3,
            RunError::Numeric(_) => 4,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        RunError::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        RunError::Data(msg.into())
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "config error: {m}"),
            RunError::Data(m) => write!(f, "data error: {m}"),
            RunError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<IngestError> for RunError {
    fn from(e: IngestError) -> Self {
        RunError::Data(e.to_string())
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Data(e.to_string())
    }
}

impl From<WindModelError> for RunError {
    fn from(e: WindModelError) -> Self {
        RunError::Numeric(e.to_string())
    }
}

impl From<CurtailmentError> for RunError {
    fn from(e: CurtailmentError) -> Self {
        RunError::Numeric(e.to_string())
    }
}

impl From<StackelbergError> for RunError {
    fn from(e: StackelbergError) -> Self {
        RunError::Numeric(e.to_string())
    }
}
