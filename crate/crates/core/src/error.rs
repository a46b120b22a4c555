use thiserror::Error;

use crate::graph::ArgumentId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument id {0:?}: ids must be non-empty and contain no whitespace or commas")]
    InvalidArgumentId(String),

    #[error("duplicate argument {0}")]
    DuplicateArgument(ArgumentId),

    #[error("relation ({from}, {to}) refers to an undeclared argument")]
    DanglingEndpoint { from: ArgumentId, to: ArgumentId },

    #[error("pair ({from}, {to}) is both an attack and a support")]
    RelationOverlap { from: ArgumentId, to: ArgumentId },

    #[error("strength {value} of {what} is outside [0, 1]")]
    StrengthOutOfRange { what: String, value: String },

    #[error("unknown argument {0}")]
    UnknownArgument(ArgumentId),

    #[error("CyclicGraph: the QBAG contains a cycle")]
    CyclicGraph,

    #[error("CyclicGraph at step {step}")]
    CyclicStep { step: usize },

    #[error("EmptyChain: a chain needs at least one QBAG")]
    EmptyChain,

    #[error("topic {0} does not occur in every step of the chain")]
    TopicNotInChain(String),

    #[error("topic set is empty")]
    EmptyTopics,

    #[error("unknown semantics {0:?} (available: dfquad)")]
    UnknownSemantics(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("{path}: {source}")]
    AtPath {
        path: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, path: impl Into<String>) -> Self {
        Error::AtPath { path: path.into(), source: Box::new(self) }
    }

    /// The innermost error once field paths are peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPath { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
