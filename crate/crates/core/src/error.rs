use thiserror::Error;

/// Errors produced by graph construction, bound computation, witness
/// evaluation and simulation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("no proper coloring with at most {0} colors")]
    NoColoring(usize),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("cut must be a nonempty proper subset of the vertices")]
    TrivialCut,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{what} needs n <= {gate}, got n = {n}")]
    GateExceeded { what: &'static str, n: usize, gate: usize },
    #[error("invalid witness context: {0}")]
    InvalidContext(String),
    #[error("invalid estimate: {0}")]
    InvalidEstimate(String),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("construction not applicable: {0}")]
    NotApplicable(String),
    #[error("no rigorous witness constant available: {0}")]
    ConstantUnavailable(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
