use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is even; only odd characteristic is supported")]
    EvenP(u64),
    #[error("characteristic {0} is not prime")]
    CompositeP(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{n} exceeds the supported maximum {max}")]
    FieldTooLarge { p: u64, n: u32, max: u64 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("no modulus available for F_{p}^{n}: no table entry and exhaustive search disabled")]
    NoModulusAvailable { p: u64, n: u32 },
    #[error("element {0} does not generate the multiplicative group")]
    NotAGenerator(u64),
    #[error("element index {0} is outside the field")]
    ElementOutOfRange(u64),
    #[error("the zero element has no discrete logarithm")]
    ZeroElement,
    #[error("dimension mismatch: {0}x{0} against {1}x{1}")]
    DimensionMismatch(usize, usize),
    #[error("ell = {ell} does not divide q - 1 = {q_minus_1}")]
    InvalidEll { ell: u64, q_minus_1: u64 },
    #[error("ell must be at least 2 to extract minors")]
    EllTooSmall,
    #[error("ell = 1 is excluded (K is the whole multiplicative group)")]
    EllOne,
    #[error("context too large for {what}: q = {q} exceeds {max}")]
    ContextTooLarge {
        what: &'static str,
        q: u64,
        max: u64,
    },
    #[error("k = {0} is even; the survey requires odd k")]
    KEven(u64),
    #[error("K is not a difference set for q = {q}, ell = {ell}")]
    NotADifferenceSet { q: u64, ell: u64 },
    #[error("search range too large: max q {max_q} exceeds {limit}")]
    RangeTooLarge { max_q: u64, limit: u64 },
    #[error("i/o failure: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
