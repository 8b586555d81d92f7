use thiserror::Error;

/// Which admissibility condition on a break sequence failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeViolation {
    /// gcd(p, b0) = 1 fails.
    FirstBreakDivisible,
    /// b1 >= p*b0 fails.
    SecondBreakTooSmall,
    /// b1 > p*b0 but p divides b1.
    SecondBreakDivisible,
}

impl std::fmt::Display for TypeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TypeViolation::FirstBreakDivisible => write!(f, "gcd(p, b0) = 1"),
            TypeViolation::SecondBreakTooSmall => write!(f, "b1 >= p*b0"),
            TypeViolation::SecondBreakDivisible => write!(f, "b1 > p*b0 implies gcd(p, b1) = 1"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("p must be odd, got {0}")]
    EvenPrime(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("coefficient {value} at degree {degree} is not a residue mod {p}")]
    UnreducedCoefficient { degree: usize, value: u32, p: u32 },
    #[error("substituted series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("series is not a principal unit (constant term must be 1)")]
    NotPrincipalUnit,
    #[error("precision {have} is too small, need at least {need}")]
    PrecisionTooSmall { have: usize, need: usize },
    #[error("not a Nottingham element: {0}")]
    NotNottingham(&'static str),
    #[error("x2 must be a nonzero residue")]
    ZeroX2,
    #[error(
        "index {index} is not allowed (must satisfy 1 <= j <= {bound} and p does not divide j)"
    )]
    InvalidIndex { index: u32, bound: u32 },
    #[error("value {value} at index {index} is not a residue mod {modulus}")]
    InvalidValue {
        index: u32,
        value: u32,
        modulus: u32,
    },
    #[error("character does not vanish on U_{}: value {value} at index {index} needs order dividing p", bound + 1)]
    NotContinuous { index: u32, value: u32, bound: u32 },
    #[error("type <{b0},{b1}> is not admissible for p = {p}: condition {violation} fails")]
    InvalidType {
        p: u32,
        b0: u32,
        b1: u32,
        violation: TypeViolation,
    },
    #[error("character is not surjective onto Z/p^2Z")]
    NotSurjective,
    #[error(
        "expected a character of type <{expected_b0},{expected_b1}>, found <{found_b0},{found_b1}>"
    )]
    WrongType {
        expected_b0: u32,
        expected_b1: u32,
        found_b0: u32,
        found_b1: u32,
    },
    #[error("unsupported first break {0} (only 1 and 2 are implemented)")]
    UnsupportedType(u32),
    #[error("budget exceeded: {needed} action evaluations needed, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("instance p = {p}, m = {m} is large and requires an explicit opt-in")]
    LargeInstance { p: u32, m: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
