use num_rational::BigRational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("branch count mismatch: expected {expected}, found {found}")]
    BranchCount { expected: usize, found: usize },

    #[error("branch index {k} out of range 1..={n}")]
    BranchOutOfRange { k: usize, n: usize },

    #[error("generator a{0} has no registered image")]
    UnknownGenerator(usize),

    #[error("group rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("chain data: {0}")]
    ChainShape(String),

    #[error("subgroup of index {index} is not registered for this homomorphism: {reason}")]
    SubgroupNotRegistered { index: u64, reason: String },

    #[error("invalid circle map: {0}")]
    InvalidMap(String),

    #[error("branches {j} and {k} collide at t = {t}")]
    ValuesCollide { j: usize, k: usize, t: BigRational },

    #[error("branch {k}: endpoint value is not a deck translate of any start value")]
    EndpointMismatch { k: usize },

    #[error("degenerate geometry on branch {k} at t = {t}: {reason}")]
    Degenerate {
        k: usize,
        t: BigRational,
        reason: &'static str,
    },

    #[error("fixed point at t = {t} lies on the region boundary")]
    FixedPointOnBoundary { t: BigRational },

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            what,
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// True for failures caused by the geometry of a map rather than malformed input.
    pub fn is_degenerate_geometry(&self) -> bool {
        matches!(
            self,
            Error::Degenerate { .. } | Error::FixedPointOnBoundary { .. } | Error::NotSimplicial(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
