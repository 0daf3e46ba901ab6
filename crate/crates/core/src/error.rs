use thiserror::Error;

/// Errors raised by the exact-arithmetic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} is past the end of an explicit list of length {len}")]
    IndexBeyondExplicitList { index: usize, len: usize },

    #[error("indices start at 1, got 0")]
    ZeroIndex,

    #[error("base b_{index} = {base} is smaller than 2")]
    BaseTooSmall { index: usize, base: String },

    #[error("digit a_{index} = {digit} is outside 0..=b_{index} - 1 = {max}")]
    DigitOutOfRange {
        index: usize,
        digit: String,
        max: String,
    },

    #[error("the natural sequence (1, 2, 3, ...) is a divisibility sequence only and cannot carry a Cantor series")]
    NaturalBasesNotSeries,

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("invalid digit rule: {0}")]
    InvalidDigitRule(String),

    #[error(
        "enclosure width 1/B_n did not reach the requested precision within depth {max_depth}"
    )]
    PrecisionUnreachable { max_depth: usize },

    #[error("no n <= {horizon} with {q} | b_1...b_n")]
    HorizonExhausted { q: i64, horizon: usize },

    #[error("q must be nonzero")]
    ZeroModulus,

    #[error("enclosure at depth {depth} too wide to decide the condition at n = {n}")]
    UndecidedAtDepth { n: usize, depth: usize },

    #[error("theta_{n} <= 1/2 could not be certified; it is violated")]
    PreconditionNotCertified { n: usize },

    #[error("cannot parse {input:?} as an exact rational")]
    ParseRational { input: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
