use std::path::PathBuf;

use crate::rational::Rational;

/// Errors raised by graph construction, solvers and file handling.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("density floor {sigma} exceeds the best achievable total density d_tds = {d_tds}")]
    Infeasible { sigma: Rational, d_tds: Rational },

    #[error("no set with density gap at most {alpha} was found")]
    NoFeasibleSet { alpha: Rational },

    #[error("exhaustive enumeration refused: n = {n} exceeds the limit of {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("logic error: {0}")]
    Logic(String),

    #[error("bench config: {0}")]
    Config(String),
}

impl Error {
    /// True for errors that mean the requested problem has no solution,
    /// as opposed to bad input.
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. } | Error::NoFeasibleSet { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
