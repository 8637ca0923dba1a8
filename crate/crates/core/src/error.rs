use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0} -> {1} has a non-positive weight in a weighted graph")]
    NonPositiveWeight(usize, usize),
    #[error("graph contains a directed cycle")]
    Cyclic,
    #[error("graph must be weighted for this operation")]
    Unweighted,
    #[error("edge {0} -> {1} is not in the transitive closure")]
    NotInClosure(usize, usize),
    #[error("potential is already zero")]
    ZeroPotential,
    #[error("no active pairs")]
    NoActivePairs,
    #[error("stickiness denominator is zero")]
    EmptyIntersection,
    #[error("round budget of {0} exceeded")]
    BudgetExceeded(usize),
    #[error("chain {0} was already picked")]
    AlreadyPicked(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Short stable name of the variant, for result tables.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::SelfLoop(_) => "self-loop",
            Error::DuplicateEdge(..) => "duplicate-edge",
            Error::NonPositiveWeight(..) => "non-positive-weight",
            Error::Cyclic => "cyclic",
            Error::Unweighted => "unweighted",
            Error::NotInClosure(..) => "not-in-closure",
            Error::ZeroPotential => "zero-potential",
            Error::NoActivePairs => "no-active-pairs",
            Error::EmptyIntersection => "empty-intersection",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::AlreadyPicked(_) => "already-picked",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Config(_) => "config",
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
