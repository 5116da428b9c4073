use thiserror::Error;

use crate::digraph::{EdgeId, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("duplicate vertex {0}")]
    DuplicateVertex(Vertex),

    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("edge {0} is not butterfly contractible")]
    NotContractible(EdgeId),

    #[error("edge {0} is a loop")]
    LoopEdge(EdgeId),

    #[error("embedding: {0}")]
    Embedding(String),

    #[error("search budget exhausted")]
    BudgetExhausted,

    #[error("construction failed verification: {0}")]
    Verification(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
