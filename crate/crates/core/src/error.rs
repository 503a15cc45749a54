use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad arguments: inadmissible orders, wrong shapes, malformed flags.
    #[error("usage error: {0}")]
    Usage(String),

    /// An operation's input violates its documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An admissible request for which no base design is shipped.
    #[error("no cataloged design for {shape} on {host}")]
    NotCataloged { shape: String, host: String },

    /// The construction machinery contradicted itself. Always a bug.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit code for the CLI: 1 invalid or failed, 2 unknown, 3 usage or parse.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse { .. } | Error::Io(_) => 3,
            Error::NotCataloged { .. } => 2,
            Error::Precondition(_) | Error::Internal(_) => 1,
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
