use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unknown variable {0}")]
    UnknownVariable(String),

    #[error("total degree {degree} exceeds the limit of {limit}")]
    DegreeLimit { degree: u32, limit: u32 },

    #[error("multi-index order {order} exceeds the configured cap of {cap}")]
    OrderCap { order: u32, cap: u32 },

    #[error("formal tau is not allowed here: {0}")]
    FormalTau(&'static str),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("grid or hbar mismatch: {0}")]
    Incompatible(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-finite value at {0}")]
    NonFinite(String),

    #[error("{kind} error at column {position}: {message}")]
    Parse {
        kind: ParseErrorKind,
        position: usize,
        message: String,
    },

    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    Dimension,
    Exponent,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Lexical => "lexical",
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Dimension => "dimension",
            ParseErrorKind::Exponent => "exponent",
        })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
