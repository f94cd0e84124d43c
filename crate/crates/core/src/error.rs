use thiserror::Error;

/// Errors raised across the crate. Verification *failures* are not errors:
/// verifiers return reports; errors mean the requested computation could not
/// be carried out at all.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error("malformed weight '{text}': {reason}")]
    MalformedWeight { text: String, reason: String },
    #[error("edge weights must be nonnegative, got {0}")]
    NegativeWeight(String),
    #[error("self-loops are forbidden ({0})")]
    SelfLoop(String),
    #[error("vertex not found: {0}")]
    VertexNotFound(String),
    #[error("duplicate vertex label: {0}")]
    DuplicateLabel(String),
    #[error("invalid terminal set: {0}")]
    InvalidTerminalSet(String),
    #[error("invalid side: {0}")]
    InvalidSide(String),
    #[error("cannot merge two terminals ({0} and {1})")]
    IllegalMerge(String, String),
    #[error("graph is disconnected ({0})")]
    Disconnected(String),
    #[error("brute-force oracle bound exceeded: {nonterminals} non-terminals > {bound}")]
    OracleTooLarge { nonterminals: usize, bound: usize },
    #[error("cut profile does not match graph: {0}")]
    ProfileMismatch(String),
    #[error("terminal lists differ: {0}")]
    TerminalMismatch(String),
    #[error("strict uniqueness violated; non-unique minimum cuts for bipartitions {0:?}")]
    NonUniqueRows(Vec<usize>),
    #[error("instance construction failed: {0}")]
    Construction(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("size guard: {0}")]
    SizeGuard(String),
    #[error("plane graph state: {0}")]
    PlaneState(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("instance bundle: {0}")]
    Bundle(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("metadata: {0}")]
    Meta(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GraphError>;
