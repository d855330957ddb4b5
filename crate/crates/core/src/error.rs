use thiserror::Error;

/// What went wrong while reading a parenthesis string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    InvalidCharacter(u8),
    /// A `)` with no matching `(`.
    UnexpectedClose,
    /// Input ended with unclosed `(`.
    Unbalanced,
    /// The outermost pair closed before the end of the input.
    TrailingCharacters,
    TooManyNodes,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::Empty => write!(f, "empty input"),
            ParseErrorKind::InvalidCharacter(b) => {
                write!(f, "invalid character {:?}", char::from(*b))
            }
            ParseErrorKind::UnexpectedClose => write!(f, "unexpected ')'"),
            ParseErrorKind::Unbalanced => write!(f, "unbalanced parentheses"),
            ParseErrorKind::TrailingCharacters => write!(f, "trailing characters"),
            ParseErrorKind::TooManyNodes => {
                write!(f, "more than {} nodes", crate::tree::MAX_NODES)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at offset {offset}: {kind}")]
    Parse { offset: usize, kind: ParseErrorKind },

    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size cap would be exceeded.
    #[error("resource limit: {0}")]
    Resource(String),

    /// An internal consistency check failed. Always a bug.
    #[error("integrity failure: {0}")]
    Integrity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
