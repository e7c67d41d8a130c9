use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree {0} outside supported range 1..=16")]
    InvalidDegree(usize),
    #[error("malformed matrix: {0}")]
    Shape(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("unsupported request: {0}")]
    Unsupported(String),
    #[error("{argument} is not unitary (residual {residual:e})")]
    NotUnitary { argument: String, residual: f64 },
    #[error("matrix has a zero row or column")]
    ZeroLine,
    #[error("index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
