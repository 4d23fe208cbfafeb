use thiserror::Error;

/// Errors raised by the invariant machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid root context: {0}")]
    InvalidRoot(String),
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("color {color} out of range (max {max})")]
    ColorOutOfRange { color: u32, max: u32 },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("indeterminate 0/0 in {0}")]
    Indeterminate(String),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("invalid shadow: {}", .0.join("; "))]
    InvalidShadow(Vec<String>),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
