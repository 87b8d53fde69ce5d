use thiserror::Error;

use crate::dag::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is outside the vertex range of the graph")]
    VertexOutOfRange(String),

    #[error("invalid graph: {0}")]
    InvalidDag(ValidationReport),

    #[error("trivial graph: {0}")]
    TrivialGraph(String),

    #[error("not Gorenstein: {0}")]
    NotGorenstein(String),

    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),

    #[error("invalid route: {0}")]
    InvalidRoute(String),

    #[error("invalid route decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("invalid framing: {0}")]
    InvalidFraming(String),

    #[error("framing/coherence inconsistency: {0}")]
    CoherenceInconsistency(String),

    #[error("exhaustive bound exceeded: {framings} framings > bound {bound}")]
    ExhaustiveBoundExceeded { framings: u128, bound: u128 },

    #[error("affinely dependent simplex vertices")]
    AffinelyDependent,

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("Ehrhart cross-check failed: {0}")]
    EhrhartInconsistent(String),

    #[error("rank mismatch: {0}")]
    RankMismatch(String),

    #[error("non-planar rotation system: {0}")]
    NonPlanar(String),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("chain-dependent sum: {0}")]
    ChainDependent(String),

    #[error("equatorial tests disagree: {0}")]
    EquatorialMismatch(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
