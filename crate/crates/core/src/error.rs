use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdoError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge index {edge} out of range for a graph with {edges} edges")]
    EdgeOutOfRange { edge: usize, edges: usize },

    #[error("vertex {vertex} out of range for a graph with {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },

    #[error("bitstring length {found} does not match edge count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("operation requires a path with an even number of edges, got {0}")]
    OddPathLength(usize),

    #[error("path profile {profile} out of range 0..={max}")]
    ProfileOutOfRange { profile: usize, max: usize },

    #[error("operation requires a {expected} graph")]
    WrongFamily { expected: &'static str },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("input is not a valid matching ({collisions} collisions)")]
    NotAMatching { collisions: u64 },

    #[error("invalid population: {0}")]
    InvalidPopulation(String),

    #[error("index {index} out of range for population of size {len}")]
    MemberOutOfRange { index: usize, len: usize },

    #[error("too many candidates: {count} exceeds cap {cap}")]
    TooManyCandidates { count: u128, cap: u128 },

    #[error("cannot fit: {0}")]
    InvalidFit(String),

    #[error("invalid hex bitstring: {0}")]
    InvalidHex(String),
}

pub type Result<T> = std::result::Result<T, EdoError>;
