use std::path::PathBuf;

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Syntax error in an input or lexicon file, with 1-based line number.
    #[error("{file}:{line}: {msg}")]
    Parse { file: String, line: usize, msg: String },
    #[error("invalid config: {0}")]
    Config(String),
    /// Input violates a documented precondition (empty group, K too large, ...).
    #[error("{0}")]
    Data(String),
    /// Metric has no defined value on this input (e.g. zero sentences).
    #[error("metric undefined: {0}")]
    Undefined(&'static str),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn parse(file: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { file: file.into(), line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
