use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in different rings (variable context, coefficient ring
    /// or presentation).
    #[error("context mismatch: {0}")]
    Context(String),

    #[error("index out of range: {0}")]
    Range(String),

    /// A substitution has no image for some variable that occurs.
    #[error("no image given for variable `{0}`")]
    IncompleteMap(String),

    #[error("unknown generator `{0}`")]
    Generator(String),

    /// The requested restriction map is not defined on this element or ring.
    #[error("restriction undefined: {0}")]
    UndefinedRestriction(String),

    /// A relation whose shape the rewrite system cannot orient.
    #[error("unsupported relation `{0}`")]
    UnsupportedRelation(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("invalid family: {0}")]
    Family(String),
}

pub type Result<T> = std::result::Result<T, Error>;
