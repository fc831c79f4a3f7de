use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} has {actual} vertices, limit is {limit}")]
    SizeExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("edge ({0}, {1}) is not in the graph")]
    EdgeNotInGraph(usize, usize),
    #[error("vertex {0} is not in the graph")]
    VertexNotInGraph(usize),
    #[error("invalid rooted pattern: {0}")]
    InvalidRootedPattern(String),
    #[error("graph is not a tree")]
    NotATree,
    #[error("sign mismatch: {0}")]
    SignMismatch(String),
    #[error("cycle length {0} is odd")]
    OddCycleLength(usize),
    #[error("cycle length {0} is below 4")]
    CycleTooShort(usize),
    #[error("invalid attachment: {0}")]
    InvalidAttachIndex(String),
    #[error("invalid partial map: {0}")]
    InvalidPartialMap(String),
    #[error("forbidden set is empty")]
    EmptyForbiddenSet,
    #[error("corrupt store at line {line}: {reason}")]
    CorruptStore { line: usize, reason: String },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("infeasible input: {0}")]
    InfeasibleInput(String),
    #[error("pattern needs at least two edges, has {0}")]
    TooFewEdges(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("part size mismatch: {0}")]
    PartSizeMismatch(String),
    #[error("empty candidate set for part {0}")]
    EmptyCandidateSet(usize),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable snake-case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SizeExceeded { .. } => "size_exceeded",
            Error::InvalidGraph(_) => "invalid_graph",
            Error::Parse(_) => "parse",
            Error::EdgeNotInGraph(..) => "edge_not_in_graph",
            Error::VertexNotInGraph(_) => "vertex_not_in_graph",
            Error::InvalidRootedPattern(_) => "invalid_rooted_pattern",
            Error::NotATree => "not_a_tree",
            Error::SignMismatch(_) => "sign_mismatch",
            Error::OddCycleLength(_) => "odd_cycle_length",
            Error::CycleTooShort(_) => "cycle_too_short",
            Error::InvalidAttachIndex(_) => "invalid_attach_index",
            Error::InvalidPartialMap(_) => "invalid_partial_map",
            Error::EmptyForbiddenSet => "empty_forbidden_set",
            Error::CorruptStore { .. } => "corrupt_store",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::InfeasibleInput(_) => "infeasible_input",
            Error::TooFewEdges(_) => "too_few_edges",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::PartSizeMismatch(_) => "part_size_mismatch",
            Error::EmptyCandidateSet(_) => "empty_candidate_set",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_size(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::SizeExceeded { what, limit, actual })
    } else {
        Ok(())
    }
}
