use thiserror::Error;

/// Problems found while reading the algebra text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("table for `{symbol}` has {found} entries, expected {expected}")]
    WrongTableLength {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("entry {value} out of range for an algebra of size {size}")]
    OutOfRange { value: String, size: usize },
    #[error("duplicate operation symbol `{0}`")]
    DuplicateSymbol(String),
    #[error("unexpected end of input: {0}")]
    UnexpectedEof(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{symbol}` has arity {expected}, got {found} arguments")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element {value} out of range for size {size}")]
    ElementOutOfRange { value: usize, size: usize },
    #[error("tuples of mixed arity")]
    MixedArity,
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("partition is not a congruence")]
    NotCongruence,
    #[error("subset is not a subuniverse")]
    NotSubuniverse,
    #[error("{what} of size {size} exceeds the bound {bound}")]
    TooLarge {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),
    #[error("coordinate {index} out of range for arity {arity}")]
    BadCoordinate { index: usize, arity: usize },
    #[error("tuples of arity {arity} over {size} elements do not pack into 128 bits")]
    TupleTooWide { arity: usize, size: usize },
    #[error("{generators} distinct generators exceed the insertion budget {budget}")]
    BudgetBelowGenerators { generators: usize, budget: u64 },
    #[error("closure did not finish within the budget")]
    BudgetExhausted,
    #[error("second partition does not refine the first")]
    NotRefinement,
    #[error("incompatible algebra: {0}")]
    Incompatible(String),
    #[error("subpower is not subdirect")]
    NotSubdirect,
    #[error("subpower is not closed")]
    NotClosed,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
