use std::fmt;

use thiserror::Error;

/// Position-tagged failure from the polynomial parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    ExponentOverflow,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at {}:{}: {}", self.line, self.column, msg)
            }
            ParseErrorKind::UnknownVariable(name) => {
                write!(f, "unknown variable `{}` at {}:{}", name, self.line, self.column)
            }
            ParseErrorKind::ExponentOverflow => {
                write!(f, "exponent overflow at {}:{}", self.line, self.column)
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("rejected input: {0}")]
    RejectedInput(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("map is not invertible: {0}")]
    NotInvertible(String),

    #[error("normalization impossible: eigenvalue 1 at x{index} leaves a nonzero constant")]
    NormalizationImpossible { index: usize },

    #[error("resonant obstruction at k = {k}, exponent {exponent:?}: denominator vanishes")]
    ResonantObstruction { k: usize, exponent: Vec<u32> },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("hypothesis violation for {claim}: {reason}")]
    HypothesisViolation { claim: String, reason: String },

    #[error("unknown claim `{0}`")]
    UnknownClaim(String),

    #[error("degree bound exceeded: {0}")]
    DegreeBound(String),

    #[error("{0}")]
    Session(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
