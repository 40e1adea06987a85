use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Row {
        path: PathBuf,
        line: u64,
        reason: String,
    },

    #[error("duplicate week {week} in market series")]
    DuplicateWeek { week: i64 },

    #[error("non-finite value at week {week}")]
    NonFinite { week: i64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unsupported stemmer language `{0}`")]
    UnsupportedLanguage(String),

    #[error("precomputed sentiment has no score for message `{0}`")]
    MissingScore(String),

    #[error("centralization undefined for n = {0} (needs n >= 3)")]
    TooFewNodes(usize),

    #[error("correlation undefined: zero variance in `{0}`")]
    ZeroVariance(String),

    #[error("insufficient observations: have {have}, need {need}")]
    InsufficientObservations { have: usize, need: usize },

    #[error("design matrix is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("week grid mismatch: {0}")]
    GridMismatch(String),

    #[error("no statistic could be estimated; first failure: {0}")]
    NothingEstimable(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("window {window}: {source}")]
    InWindow {
        window: usize,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse failure class, mapped to process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Analysis,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) | Error::UnsupportedLanguage(_) => ErrorClass::Config,
            Error::Io { .. }
            | Error::Row { .. }
            | Error::DuplicateWeek { .. }
            | Error::NonFinite { .. }
            | Error::Invalid(_)
            | Error::MissingScore(_)
            | Error::GridMismatch(_)
            | Error::MissingColumn(_) => ErrorClass::Data,
            Error::TooFewNodes(_)
            | Error::ZeroVariance(_)
            | Error::InsufficientObservations { .. }
            | Error::RankDeficient { .. }
            | Error::NothingEstimable(_) => ErrorClass::Analysis,
            Error::InWindow { source, .. } => source.class(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
