use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex: {0}")]
    UnknownVertex(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported parameter: {0}")]
    Unsupported(String),

    /// Face enumeration would exceed the configured cap.
    #[error("resource limit exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: String,
        needed: u128,
        cap: u128,
    },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
