use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("node {node} is not a {expected} node")]
    WrongNodeKind { node: usize, expected: &'static str },

    #[error("ground sets differ in size ({left} vs {right})")]
    GroundSizeMismatch { left: usize, right: usize },

    #[error("value {value} outside 0..={bound}")]
    ValueOutOfRange { value: i64, bound: i64 },

    #[error("instance has {n} vertices, brute force is limited to {limit}")]
    OracleGuard { n: usize, limit: usize },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
