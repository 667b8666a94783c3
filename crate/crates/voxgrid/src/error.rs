use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("resolution mismatch: {left} vs {right}")]
    ResolutionMismatch { left: u32, right: u32 },
    #[error("invalid resolution {0}: must be a power of two >= 2")]
    InvalidResolution(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("value out of range: {0}")]
    ValueOutOfRange(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
