use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    /// A computation stopped because a configured limit was hit. This says
    /// nothing about the mathematical answer.
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: u64 },

    #[error("no cofactor exists: {0}")]
    NotDivisible(String),

    #[error("variable tables do not match")]
    TableMismatch,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
