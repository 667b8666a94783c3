use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("op `{0}` has no second-order rule")]
    Capability(&'static str),
    #[error("checkpoint format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
