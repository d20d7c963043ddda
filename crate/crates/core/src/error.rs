use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the simulator and the analytic chain.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the documented domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration, sweep specification or config file is invalid.
    #[error("config error: {0}")]
    Config(String),

    /// A numerical routine did not reach its requested tolerance.
    #[error("no convergence: {what} (achieved error estimate {achieved:e})")]
    Convergence { what: String, achieved: f64 },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the `simulate` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Config(_) => 2,
            Error::Convergence { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(Error::domain("x").exit_code(), 2);
        assert_eq!(Error::config("x").exit_code(), 2);
        let c = Error::Convergence { what: "x".into(), achieved: 1.0 };
        assert_eq!(c.exit_code(), 3);
        let io = Error::io("f", std::io::Error::from(std::io::ErrorKind::NotFound));
        assert_eq!(io.exit_code(), 4);
    }
}
