use std::path::PathBuf;

use thiserror::Error;

use crate::config::ConfigError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("logical channel fully depolarizing (p_L = {0})")]
    FullyDepolarizing(f64),

    #[error("degenerate SQL benchmark: local envelope vanishes at T_seg")]
    DegenerateBenchmark,

    #[error("empty optimization grid")]
    EmptyGrid,

    /// A request the oracles decline to run (cost guard, step size).
    #[error("refused: {0}")]
    Refused(String),

    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("malformed table: {0}")]
    Table(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
