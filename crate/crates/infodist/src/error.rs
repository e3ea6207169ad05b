use std::io;
use std::path::PathBuf;

use infodist_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    /// A distance evaluation failed while building a matrix.
    #[error("pair ({a}, {b}): {source}")]
    Pair { a: String, b: String, source: CoreError },
    #[error("fetch failed for {failed} of {total} entries")]
    Fetch { failed: usize, total: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 2 input, 3 compressor, 4 matrix.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(CoreError::Compressor { .. } | CoreError::InvalidCompressor(_)) => 3,
            Error::Pair { .. } => 4,
            _ => 2,
        }
    }
}
