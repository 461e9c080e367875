use thiserror::Error;

/// Failures raised by the arithmetic engines and the verification drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("F_{{{sub}}} is not a subfield of F_{{{sup}}}")]
    NotSubfield { sub: u64, sup: u64 },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("coefficient not divisible by {0}")]
    NotDivisible(String),
    #[error("coefficient of degree {degree} does not vanish: claimed degree is wrong")]
    NonVanishingTail { degree: usize },
    #[error("leading coefficient of claimed degree {degree} vanishes")]
    ZeroLeading { degree: usize },
    #[error("character order {d} does not divide {modulus}")]
    OrderMismatch { d: u64, modulus: u64 },
    #[error("no finite point beyond the origin")]
    EmptyInput,
    #[error("polygons have different lengths ({0} vs {1})")]
    LengthMismatch(u64, u64),
    #[error("valuation precision cap {0} exhausted")]
    PrecisionExhausted(u32),
    #[error("{a} and {b} are not coprime")]
    NotCoprime { a: u64, b: u64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("permutation set for n = {n} exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("generic polygon is not convex for p = {p}, d = {d}, e = {e}, kappa = {kappa}")]
    NonConvex { p: u64, d: u64, e: u64, kappa: u64 },
    #[error("enumeration of {size} elements exceeds bound {bound}")]
    EnumerationBound { size: u128, bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code reported by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EnumerationBound { .. } | Error::CapExceeded { .. } => 3,
            Error::InternalInconsistency(_)
            | Error::NotDivisible(_)
            | Error::NonVanishingTail { .. }
            | Error::ZeroLeading { .. }
            | Error::PrecisionExhausted(_)
            | Error::NonConvex { .. } => 4,
            _ => 2,
        }
    }
}
