use thiserror::Error;

/// Errors produced by the numerical kernels and the experiment driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the function's domain.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A series or iteration exhausted its budget before meeting tolerance.
    /// `partial` holds the best available estimate.
    #[error("{func} did not converge after {iterations} iterations (partial value {partial:e})")]
    NonConvergence {
        func: &'static str,
        iterations: usize,
        partial: f64,
    },

    /// A configuration file failed to parse or validate. `path` names the
    /// offending field (dotted, with array indices).
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    /// Failure while evaluating one point of a sweep.
    #[error("at {variable} = {value}: {source}")]
    AtPoint {
        variable: &'static str,
        value: f64,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl Error {
    /// The error with any sweep-point context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
