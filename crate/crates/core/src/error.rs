use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid vertex pair ({i}, {j}) for a graph on {n} vertices")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("rank-2 update is numerically singular (denominator {denominator:e})")]
    SingularUpdate { denominator: f64 },

    #[error("geometric random walk diverges: lambda * max-degree product = {bound}")]
    DivergentKernel { bound: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("kernel linear system is singular")]
    SingularKernel,

    #[error("graphs are incompatible: {0}")]
    IncompatibleGraphs(String),

    #[error("graph on {n} vertices has no subsets of size {size}")]
    GraphTooSmall { n: usize, size: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid kernel parameter: {0}")]
    InvalidKernel(String),

    #[error("exhaustive enumeration over {n} vertices is too large")]
    TooLarge { n: usize },

    #[error("cannot ingest {}: {message}", path.display())]
    Ingest { path: PathBuf, message: String },

    #[error("config line {line}, field `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
