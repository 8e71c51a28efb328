use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("declaration error: {0}")]
    Declaration(String),
    #[error("{file}:{line}:{col}: {msg}")]
    Parse {
        file: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("granularity error: {0}")]
    Granularity(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not determinate: undecided atoms {0:?}")]
    NotDeterminate(Vec<String>),
    #[error("compilation bound of {limit} expansions reached; frontier configuration: {frontier}")]
    BoundExceeded { limit: usize, frontier: String },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) | Error::BoundExceeded { .. } => 3,
            _ => 2,
        }
    }
}
