use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("invalid camera: {0}")]
    Camera(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
