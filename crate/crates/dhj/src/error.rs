use thiserror::Error;

/// Crate-wide error type.
///
/// `InternalCheckFailed` is special: it marks a violated internal
/// invariant (a postcondition recheck that can only fail on an
/// implementation bug), never a property of the input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u64),
    #[error("word length must be at least 1")]
    EmptyWord,
    #[error("ambient [{k}]^{n} has {points} points, exceeding the cap of {cap}")]
    AmbientTooLarge { k: u64, n: u64, points: u128, cap: usize },
    #[error("letter {letter} out of range 1..={k}")]
    LetterOutOfRange { letter: u64, k: u64 },
    #[error("variable v{var} out of range 1..={vars}")]
    VariableOutOfRange { var: u64, vars: u64 },
    #[error("variable v{0} never occurs")]
    VariableMissing(u64),
    #[error("variable word is not canonical: v{later} first occurs before v{earlier}")]
    NotCanonical { earlier: u64, later: u64 },
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(u64, u64),
    #[error("ambient mismatch: [{k_a}]^{n_a} vs [{k_b}]^{n_b}")]
    AmbientMismatch { k_a: u64, n_a: u64, k_b: u64, n_b: u64 },
    #[error("arity mismatch: expected {expected} letters, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: u64, got: u64 },
    #[error("restriction alphabet {k_prime} out of range 2..={k}")]
    RestrictionOutOfRange { k_prime: u64, k: u64 },
    #[error("slice prefix length {prefix} must be shorter than the word length {n}")]
    SliceTooLong { prefix: u64, n: u64 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("duplicate word {0} in wordset")]
    DuplicateWord(String),
    #[error("wordset parse error at line {line}: {msg}")]
    WordsetParse { line: usize, msg: String },
    #[error("oracle table parse error at line {line}: {msg}")]
    OracleTableParse { line: usize, msg: String },
    #[error("missing oracle value: {0}")]
    MissingOracleValue(String),
    #[error("report parse error: {0}")]
    ReportParse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("internal check failed in {stage}: {details}")]
    InternalCheckFailed { stage: String, details: String },
}

impl Error {
    pub fn internal(stage: &str, details: impl Into<String>) -> Self {
        Error::InternalCheckFailed { stage: stage.to_string(), details: details.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
