use thiserror::Error;

use crate::algebra::BinaryForm;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("pencil not general: {0}")]
    NotGeneral(String),

    #[error("degenerate members have non-rational parameters (residual form {residual})")]
    IrrationalRoots { residual: BinaryForm },

    #[error("line is not a point of the section: {0}")]
    NotMember(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("structure signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("sampling gave up after {attempts} attempts: {what}")]
    SamplingExhausted { what: String, attempts: usize },

    #[error("non-transverse configuration persisted after {redraws} redraws: {what}")]
    NonTransverse { what: String, redraws: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
