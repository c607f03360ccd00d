use thiserror::Error;

/// Structural problems with an object's shape, as opposed to violations of
/// the balance or coverage constraints.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("parameter {name} must be at least {min}, got {value}")]
    Parameter { name: &'static str, value: usize, min: usize },
    #[error("expected {expected} cells, got {actual}")]
    CellCount { expected: usize, actual: usize },
    #[error("cell ({row},{col}) has {actual} multiplicities, expected {expected}")]
    CellWidth { row: usize, col: usize, expected: usize, actual: usize },
    #[error("block {block:?} is not a {k}-subset of 1..={v}")]
    Block { block: Vec<usize>, v: usize, k: usize },
    #[error("block size {k} exceeds ground set size {v}")]
    BlockSize { v: usize, k: usize },
    #[error("block {0:?} is repeated in a simple design")]
    RepeatedBlock(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty input")]
    Empty,
    #[error("expected header `{0}`")]
    Header(&'static str),
    #[error("malformed token `{0}`")]
    Token(String),
    #[error("symbol {symbol} outside 1..={max}")]
    SymbolRange { symbol: usize, max: usize },
    #[error("expected {expected} {what}, found {found}")]
    Dimension { what: &'static str, expected: usize, found: usize },
    #[error("multiplicity prefix not allowed here")]
    Multiplicity,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Parse failure with a 1-based line/column position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        Self { line, column, kind }
    }
}

/// Errors raised by the certificate generators and bound evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("invalid symbol pair {{{a},{b}}} for t={t}")]
    Pair { a: usize, b: usize, t: usize },
    #[error("cell ({row},{col}) repeats a symbol; defining-set analysis needs set-valued cells")]
    MultisetCell { row: usize, col: usize },
    #[error("partial object is not contained in the full object: {0}")]
    NotSubset(String),
    #[error("certificate does not match the parameters: {0}")]
    Mismatch(String),
    #[error("swap drove block {block:?} below zero multiplicity")]
    NegativeMultiplicity { block: Vec<usize> },
    #[error("odd trail of length {0} cannot be alternated")]
    OddTrail(usize),
    #[error("graph has {vertices} vertices; exhaustive search is limited to {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("edge {{{0},{1}}} crosses the declared bipartition incorrectly")]
    Bipartition(usize, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}
