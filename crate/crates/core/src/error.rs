use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("invalid scalar {text:?}: {reason}")]
    InvalidScalar { text: String, reason: String },
    #[error("letter {letter} is outside the alphabet 1..={alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },
    #[error("subword length must be positive")]
    ZeroSubwordLength,
    #[error("k = {k} is outside 1..={max} for n = {n}")]
    SubwordLengthOutOfRange { n: usize, k: usize, max: usize },
    #[error("cannot compare words of lengths {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("words over different alphabets ({left} and {right})")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("generator set is empty")]
    EmptyGeneratorSet,
    #[error("filtration only reaches level {built}, level {needed} required")]
    FiltrationTooShallow { built: usize, needed: usize },
    #[error("filtration truncated at max length {0} before the rank sequence stabilized")]
    Truncated(usize),
    #[error("enumeration of {requested} words exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u128 },
    #[error("rewrite not applicable: {0}")]
    NotApplicable(String),
    #[error("no prime p = 1 (mod {n}) found below {cap}")]
    NoSuitablePrime { n: usize, cap: u64 },
    #[error("{location}: {message}")]
    Format { location: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
