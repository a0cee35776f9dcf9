use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no overdefined system within {samples} samples")]
    NotOverdefined { samples: usize },

    #[error("infeasible: {0}")]
    Feasibility(String),

    #[error("search exhausted after {attempts} attempts (best cost {best_cost:.2} bits)")]
    SearchExhausted {
        attempts: usize,
        best: Vec<usize>,
        best_cost: f64,
    },

    #[error("keystream: {0}")]
    Keystream(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
