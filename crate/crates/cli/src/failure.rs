use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Failure {
    /// Bad flags, unreadable or malformed input. Exit code 2.
    #[error("{0}")]
    Usage(String),
    /// Numeric domain violation or a failed check. Exit code 1.
    #[error("{0}")]
    Numeric(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Failure::Numeric(msg.into())
    }

    /// Attaches the offending flag to a library error.
    pub fn from_lib(flag: &str, err: smoothdiv::Error) -> Self {
        let msg = format!("--{flag}: {err}");
        if err.is_usage() {
            Failure::Usage(msg)
        } else {
            Failure::Numeric(msg)
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Numeric(_) => ExitCode::from(1),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(format!("write failed: {e}"))
    }
}
