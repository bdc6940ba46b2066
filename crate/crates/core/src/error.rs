use thiserror::Error;

use crate::monoid::Elem;

/// Errors produced by the library. Verification failures that carry a
/// report (division witnesses, decomposition trees, expression validation)
/// are returned as values, not as errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element index {index} out of range for a monoid of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("element {0} is not a two-sided identity")]
    NotIdentity(Elem),

    #[error("table is not associative: ({x}*{y})*{z} = {left} but {x}*({y}*{z}) = {right}")]
    NotAssociative {
        x: Elem,
        y: Elem,
        z: Elem,
        left: Elem,
        right: Elem,
    },

    #[error("construction would produce {requested} elements, exceeding the size cap {cap}")]
    SizeCap { requested: usize, cap: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a prefix code: {0}")]
    NotPrefixCode(String),

    #[error("pieces are not pairwise disjoint: {0}")]
    PiecesNotDisjoint(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("expression error: {0}")]
    Expr(String),

    #[error("language is not recognized by the given homomorphism: {0}")]
    NotRecognized(String),

    #[error("undecided: {0}")]
    Undecided(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
