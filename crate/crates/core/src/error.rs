use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(String),
    #[error("no associate of {0} is congruent to 1 mod 3*sqrt(-3)")]
    NoPrimaryAssociate(String),
    #[error("primes above 3 are not supported")]
    RamifiedPrime,
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("{0} is divisible by the modulus")]
    DivisibleByModulus(String),
    #[error("{value} is not coprime to {modulus}")]
    NotCoprime { value: String, modulus: String },
    #[error("prime {0} is excluded: it divides l or a difference of branch points")]
    ExcludedPrime(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no solution found with coefficients bounded by {0}")]
    SearchExhausted(u64),
    #[error("degenerate prime: {0}")]
    DegeneratePrime(String),
    #[error("no cube root of {0} in the residue field")]
    NoCubeRoot(String),
    #[error("inconsistent witnesses: {0}")]
    Inconsistent(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("word has a nonvanishing degree-1 Magnus coefficient")]
    NotInF2,
    #[error("degree-2 coefficients are not in normal position: {0}")]
    InconsistentShape(String),
    #[error("the constant c must be nonzero")]
    BadConstant,
    #[error("automorphism does not act on E by a root of unity")]
    NotScalar,
    #[error("generator images do not define an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("symbol values of different orders ({0} and {1}) cannot be combined")]
    MismatchedOrder(u32, u32),
    #[error("unsupported l = {0} (only 2 and 3)")]
    UnsupportedOrder(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Precondition,
    Degenerate,
    SearchExhausted,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::DivisibleByModulus(_) | Error::NotCoprime { .. } | Error::DegeneratePrime(_) => {
                ErrorClass::Degenerate
            }
            Error::SearchExhausted(_) => ErrorClass::SearchExhausted,
            Error::Inconsistent(_)
            | Error::InconsistentShape(_)
            | Error::NoCubeRoot(_)
            | Error::NotAutomorphism(_) => ErrorClass::Internal,
            _ => ErrorClass::Precondition,
        }
    }
}
