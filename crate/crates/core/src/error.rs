use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("number `{0}` is not an integer; write exact values as \"p/q\" strings")]
    InexactNumber(String),
    #[error("number `{0}` is not finite")]
    NonFinite(String),
    #[error("expected a number or string, found {0}")]
    WrongType(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{what} must be square, got {rows}x{cols}")]
    NotSquare {
        what: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("delay must be at least 1, got {0}")]
    InvalidDelay(i64),
    #[error("matrices do not commute")]
    NotCommuting,
    #[error("initial data must cover Z_{{-m}}^{{1}}: {0}")]
    InitialData(String),
    #[error("invalid forcing: {0}")]
    Forcing(String),
    #[error("horizon must be at least 1, got {0}")]
    InvalidHorizon(i64),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Scalar(#[from] ParseScalarError),
    #[error("{0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
