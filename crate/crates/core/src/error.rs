use thiserror::Error;

#[derive(Debug, Error)]
pub enum GpError {
    #[error("problem dimension n must be at least 1")]
    ZeroDimension,

    #[error("initial size must be at least 1")]
    ZeroSize,

    #[error("an individual needs at least one leaf")]
    EmptyIndividual,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("variable x{var} is outside 1..={n}")]
    VariableOutOfRange { var: usize, n: usize },

    #[error("tree parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cannot summarize an empty group")]
    EmptyGroup,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, GpError>;
