use thiserror::Error;

use crate::shape::Shape;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed regex literal at position {position}: {message}")]
    MalformedLiteral { position: usize, message: String },
    #[error("alternatives have different shapes: {left} vs {right}")]
    ShapeMismatch { left: Shape, right: Shape },
    #[error("regex may match empty string")]
    NotConsuming,
}

/// Failures raised while executing machine instructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("PushChar executed before any character was consumed")]
    MissingChar,
    #[error("stack underflow executing {instruction}")]
    StackUnderflow { instruction: String },
    #[error("shape violation: {0}")]
    ShapeViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
