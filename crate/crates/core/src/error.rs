use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("duplicate letter `{0}` in alphabet")]
    DuplicateLetter(String),
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter index {index} out of range for alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },
    #[error("operation requires a nonempty word")]
    EmptyWord,
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("substitution is not an endomorphism")]
    NotEndomorphism,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("directive sequence is not primitive within horizon {0}")]
    NotPrimitive(usize),
    #[error("horizon insufficient for {what}: need {needed}, have {available}")]
    HorizonInsufficient {
        what: String,
        needed: usize,
        available: usize,
    },
    #[error("the given set of words is not a code")]
    NotACode,
    #[error("language is empty")]
    EmptyLanguage,
    #[error("word `{0}` does not belong to the language")]
    NotInLanguage(String),
    #[error("{what} exceeds cap {cap} (required {required})")]
    CapExceeded {
        what: String,
        cap: usize,
        required: String,
    },
    #[error("saturation is not established by the certificate")]
    SaturationNotEstablished,
}
