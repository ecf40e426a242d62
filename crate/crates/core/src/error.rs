use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate document url `{url}` (document #{index})")]
    DuplicateUrl { url: String, index: usize },
    #[error("unknown format element kind `{0}`")]
    UnknownElementKind(String),
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: query count must be a positive integer")]
    NonPositiveCount { line: usize },
    #[error("query must contain at least one keyword")]
    EmptyQuery,
    #[error("query log holds no query units")]
    EmptyLog,
    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },
    #[error("eigensolver did not converge: off-diagonal norm {off_norm:e} after {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize, off_norm: f64 },
    #[error("static rank did not converge in {iterations} iterations (last L1 change {last_change:e})")]
    StaticRankNoConvergence {
        iterations: usize,
        last_change: f64,
        last: Vec<(String, f64)>,
    },
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("all static ranks are zero")]
    AllRanksZero,
    #[error("min_pages floor {floor} over {domains} domains exceeds total budget {total}")]
    InfeasibleFloor { floor: u64, domains: usize, total: u64 },
    #[error("lambda {0} lies outside [0, 1]")]
    LambdaOutOfRange(f64),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("unknown topic `{0}`")]
    UnknownTopic(String),
    #[error("could not reach in-link spread {target} within {tolerance} (best {best})")]
    SpreadUnattainable { target: f64, tolerance: f64, best: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Non-fatal conditions reported alongside a successful result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// An outlink points at a domain that has no documents in the corpus.
    ExternalTarget { target: String },
    /// A query-log line carried no keywords and was skipped.
    EmptyQuery { line: usize },
    /// A query longer than the configured maximum was truncated.
    QueryTruncated { line: usize, len: usize, max: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ExternalTarget { target } => {
                write!(f, "outlink target `{target}` has no documents; marked external")
            }
            Warning::EmptyQuery { line } => write!(f, "line {line}: empty keyword list, skipped"),
            Warning::QueryTruncated { line, len, max } => {
                write!(f, "line {line}: query of {len} keywords truncated to {max}")
            }
        }
    }
}
