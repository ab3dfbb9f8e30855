use thiserror::Error;
use unistab_algebra::AlgebraError;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no slice found: {0}")]
    SliceNotFound(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CoreError {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            CoreError::Algebra(AlgebraError::ResourceLimit { .. }) => 4,
            CoreError::Algebra(AlgebraError::NotDivisible(_)) | CoreError::Internal(_) => 5,
            CoreError::Algebra(AlgebraError::TableMismatch) => 5,
            CoreError::Algebra(_) | CoreError::InvalidInstance(_) => 1,
            CoreError::Precondition(_) | CoreError::SliceNotFound(_) => 3,
        }
    }
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
