use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("K-factor undefined: the strongest component carries all of the power")]
    SingularKFactor,

    #[error("empty result: {0}")]
    EmptyResult(String),

    #[error("validity index undefined: {0}")]
    UndefinedIndex(String),

    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl ChannelError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        ChannelError::InvalidInput(msg.into())
    }

    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        ChannelError::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ChannelError>;
