use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("grading violated: {0}")]
    Grading(String),
    #[error("input is not graded: {0}")]
    Ungraded(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid document: {0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("no certified choice found after {attempts} attempts ({context}); try another seed")]
    SearchExhausted { attempts: usize, context: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
