use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),

    #[error("diagram is not right-angled")]
    NotRightAngled,

    #[error("rank {rank} exceeds the limit {limit} for {what}")]
    RankTooLarge {
        rank: usize,
        limit: usize,
        what: &'static str,
    },

    #[error("expected {expected} factors, got {got}")]
    FactorCount { expected: usize, got: usize },

    #[error("index {0} is outside the index set")]
    UnknownIndex(usize),

    #[error("unknown index label {0:?}")]
    UnknownLabel(String),

    #[error("empty index subset")]
    EmptySubset,

    #[error("m_ij is infinite for ({0}, {1}); p(i, j) is undefined")]
    InfiniteLabel(usize, usize),

    #[error("search exceeded its cap of {cap} {what}")]
    CapExceeded { cap: usize, what: &'static str },

    #[error("word is not reduced")]
    NotReduced,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid color {color} for type {ty} (parameter {q})")]
    InvalidColor { ty: usize, color: u32, q: u32 },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("ball of radius {radius} exceeds the cap of {cap} chambers")]
    BallTooLarge { radius: usize, cap: usize },

    #[error("chamber {0} is not in the window")]
    OutsideWindow(String),

    #[error("panel is not fully covered by the window")]
    PanelNotCovered,

    #[error("extension conflict: {0}")]
    ExtensionConflict(String),

    #[error("color mismatch: {0}")]
    ColorMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("permutation group of order above {0} is not enumerated")]
    GroupTooLarge(usize),

    #[error("unsupported export format {0:?}")]
    UnsupportedFormat(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
