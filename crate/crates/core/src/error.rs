use thiserror::Error;

/// Errors raised by the library. Every variant is a precondition or input
/// failure; none of the arithmetic is fallible on valid inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("continued fraction must have at least one coefficient")]
    EmptyContinuedFraction,

    #[error("coefficient a{index} = {value} must be a positive integer")]
    NonPositiveCoefficient { index: usize, value: String },

    #[error("convergent index {index} outside table range -1..={last}")]
    IndexOutOfRange { index: isize, last: usize },

    #[error("semiconvergent weight t = {t} outside 1..={max}")]
    WeightOutOfRange { t: String, max: String },

    #[error("cannot parse fraction {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("modulus must be nonzero")]
    ZeroModulus,

    #[error("gcd({a}, {n}) = {gcd}, base must be coprime to the modulus")]
    NotCoprime { a: u64, n: u64, gcd: u64 },

    #[error("base {a} must satisfy 0 < a < {n}")]
    BaseOutOfRange { a: u64, n: u64 },

    #[error("{a}^{p} mod {n} = {residue}, not 1; {p} is not a period")]
    NotAPeriod { a: u64, p: u64, n: u64, residue: u64 },

    #[error("n = {0} is too small, need n >= 4")]
    TooSmall(u64),

    #[error("n = {0} is a power of two, no register size 2^m fits n^2 < 2^m < 2n^2")]
    PowerOfTwo(u64),

    #[error("n = {0} is prime")]
    Prime(u64),

    #[error("period {p} must be below n = {n}")]
    PeriodTooLarge { p: u64, n: u64 },

    #[error("period must be at least 1")]
    ZeroPeriod,

    #[error("phase {0} lies outside [-pi, pi]")]
    PhaseOutOfRange(String),

    #[error("offset {offset} must be below period {p}")]
    OffsetOutOfRange { offset: u64, p: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
