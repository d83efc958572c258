use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("arity mismatch: expected {expected} images, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("zero input to {0}")]
    ZeroInput(&'static str),

    #[error("ambient free module mismatch: {0}")]
    AmbientMismatch(String),

    #[error("entry ({row}, {col}) must be homogeneous of degree {expected}, found {found}")]
    Degree { row: usize, col: usize, expected: i64, found: String },

    #[error("{line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("graded operation applied to ungraded data: {0}")]
    Ungraded(String),

    #[error("degree window too small: {0}")]
    WindowTooSmall(String),

    #[error("computation exceeded its work budget")]
    Budget,

    #[error("{0}")]
    Usage(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    /// Semantic error attributed to a position in an input file.
    #[error("{line}:{column}: {inner}")]
    At { line: usize, column: usize, inner: Box<Error> },
}

impl Error {
    /// Process exit status associated with this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Internal(_) => 3,
            Error::At { inner, .. } => inner.exit_code(),
            _ => 2,
        }
    }

    /// Attaches a source position unless one is already present.
    pub fn at(self, line: usize, column: usize) -> Self {
        match self {
            Error::Parse { .. } | Error::At { .. } => self,
            inner => Error::At { line, column, inner: Box::new(inner) },
        }
    }

    /// The error with any position wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { inner, .. } => inner.root(),
            e => e,
        }
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
