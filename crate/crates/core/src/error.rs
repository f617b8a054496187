use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("cannot select {k} items from {n}")]
    Cardinality { k: usize, n: usize },

    /// The active-set iteration hit its pass limit. `best` is the last
    /// feasible iterate.
    #[error("nnls did not converge within {passes} passes")]
    Convergence { passes: usize, best: Vec<f64> },

    #[error("simplex constraint violated after solve (|sum - 1| = {deviation:e})")]
    Constraint { deviation: f64 },

    #[error("row {index}: {source}")]
    Row {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("iteration {iteration}: {source}")]
    Iteration {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}: no data rows")]
    EmptyInput(PathBuf),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_row(self, index: usize) -> Self {
        Error::Row {
            index,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_iteration(self, iteration: usize) -> Self {
        Error::Iteration {
            iteration,
            source: Box::new(self),
        }
    }

    /// Short machine-friendly tag used in result files.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Input(_) => "input",
            Error::Degenerate(_) => "degenerate",
            Error::Cardinality { .. } => "cardinality",
            Error::Convergence { .. } => "convergence",
            Error::Constraint { .. } => "constraint",
            Error::Row { source, .. } | Error::Iteration { source, .. } => source.kind(),
            Error::Parse { .. } => "parse",
            Error::EmptyInput(_) => "empty-input",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
        }
    }
}
