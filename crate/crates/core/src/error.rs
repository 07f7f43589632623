use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants are grouped by what the CLI maps them to: invalid input,
/// resource limits, or internal inconsistencies.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("instance has no items or no agents")]
    EmptyInstance,
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("sequence entry at step {step} refers to agent {agent}, but there are only {agents} agents")]
    InvalidAgentIndex {
        step: usize,
        agent: usize,
        agents: usize,
    },
    #[error("preference row of agent {agent} is not a permutation of the items")]
    NotPermutation { agent: usize },
    #[error("utilities are not strictly decreasing along the manipulator's ranking (item {better} is not worth more than item {worse})")]
    NonStrictUtilities { better: usize, worse: usize },
    #[error("sum of utilities overflows 64 bits")]
    UtilityOverflow,
    #[error("reported ranking is not a permutation of the items")]
    RankingNotPermutation,
    #[error("unknown item `{0}`")]
    UnknownItem(String),
    #[error("agent {0} does not exist")]
    UnknownAgent(usize),
    #[error("every item is already taken")]
    NoItemAvailable,
    #[error("item ranges are undefined with fewer than two agents")]
    RangeUndefined,
    #[error("state graph exceeded the limit of {limit} states")]
    StateLimitExceeded { limit: usize },
    #[error("{what}: {required} exceeds the configured limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        required: u128,
        limit: u128,
    },
    #[error("integer program has no feasible assignment")]
    Infeasible,
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("graph input, line {line}: {msg}")]
    GraphParse { line: usize, msg: String },
    #[error("LP input, line {line}: {msg}")]
    LpParse { line: usize, msg: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by a configured ceiling rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::StateLimitExceeded { .. } | Error::LimitExceeded { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
