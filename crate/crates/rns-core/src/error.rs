use num_bigint::BigUint;

/// Errors surfaced by format construction and RNS arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("base {0} appears more than once")]
    DuplicateBase(u64),
    #[error("modulus {modulus} does not fit in {width} bits")]
    WidthOverflow { modulus: u64, width: u32 },
    #[error("format does not include a base-2 modulus")]
    MissingBaseTwo,
    #[error("power spec {base}^{power} is invalid")]
    InvalidPower { base: u64, power: u32 },
    #[error("value {0} is outside the format range")]
    OutOfRange(BigUint),
    #[error("expected {expected} digits, got {got}")]
    DigitCount { expected: usize, got: usize },
    #[error("digit {index} value {value} exceeds modulus {modulus}")]
    DigitOutOfRange { index: usize, value: u64, modulus: u64 },
    #[error("operands use different formats")]
    FormatMismatch,
    #[error("operands have different digit validity patterns")]
    ValidityMismatch,
    #[error("digit {0} is invalid")]
    DigitInvalid(usize),
    #[error("digit {digit} value {value} is not divisible by {base}^{power}")]
    NotDivisible { digit: usize, value: u64, base: u64, power: u32 },
    #[error("digit {digit} has {available} powers remaining, {requested} requested")]
    PowerExceeded { digit: usize, requested: u32, available: u32 },
    #[error("no multiplicative inverse of {0} modulo {1}")]
    NoInverse(u64, u64),
    #[error("scale step {step} failed: {source}")]
    ScaleStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("valid digits cannot represent the value being extended")]
    RangeInsufficient,
    #[error("divide by zero")]
    DivideByZero,
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("divisor increment overflowed the working range")]
    IncrementOverflow,
    #[error("internal limit exceeded: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
