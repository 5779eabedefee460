use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("window base {0} out of range (need 3 <= X <= 2^62)")]
    InvalidWindow(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid obstruction pattern: {0}")]
    InvalidPattern(String),

    #[error("pattern file line {line}: {message}")]
    PatternParse { line: usize, message: String },

    #[error("obstruction supports overlap at prime {0}")]
    PatternOverlap(u64),

    #[error("degenerate density: g({0}) = 1")]
    DegenerateDensity(u64),

    #[error("Selberg system is singular")]
    SingularSystem,

    #[error("Selberg support has {size} moduli, dense solve limit is {limit}")]
    SupportTooLarge { size: usize, limit: usize },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("missing valuation for token {0}")]
    MissingValuation(String),
}
