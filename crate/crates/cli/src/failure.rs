use std::fmt;
use std::process::ExitCode;

/// A command failure tagged with the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, unreadable input or an invalid request: exit 2.
    Usage(anyhow::Error),
    /// The geometry left its domain or degenerated: exit 3.
    Domain(anyhow::Error),
}

impl Failure {
    pub fn usage(e: impl Into<anyhow::Error>) -> Self {
        Failure::Usage(e.into())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Domain(_) => ExitCode::from(3),
        }
    }

    pub fn context(self, what: impl fmt::Display) -> Self {
        match self {
            Failure::Usage(e) => Failure::Usage(e.context(what.to_string())),
            Failure::Domain(e) => Failure::Domain(e.context(what.to_string())),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(e) | Failure::Domain(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<bcv_core::Error> for Failure {
    fn from(e: bcv_core::Error) -> Self {
        use bcv_core::Error::*;
        match e {
            OutOfDomain { .. } | NonFinite | DegenerateChart { .. } | DegenerateFrame { .. } => {
                Failure::Domain(e.into())
            }
            _ => Failure::Usage(e.into()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.into())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(e.into())
    }
}

pub type CmdResult<T> = Result<T, Failure>;
