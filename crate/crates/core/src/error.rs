use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// The working precision reached `max_bits` without resolving a decision.
    #[error("precision exhausted at {max_bits} bits: {context}")]
    PrecisionExhausted { max_bits: u32, context: String },

    /// A certified value straddles a half-integer too widely to bound its
    /// distance to the nearest integer.
    #[error("ambiguous rounding: enclosure width {width} exceeds 1/2")]
    AmbiguousRounding { width: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("y = ax + b is not solvable in the positive integers: {0}")]
    NotSolvableInN(String),

    #[error("window has {0} member(s); at least 2 are needed")]
    TooFewMembers(usize),

    #[error("only {usable} usable checkpoint(s); at least {needed} are needed")]
    InsufficientData { usable: usize, needed: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A result failed re-verification through an independent path.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn exhausted(max_bits: u32, context: impl Into<String>) -> Self {
        Error::PrecisionExhausted {
            max_bits,
            context: context.into(),
        }
    }

    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::AmbiguousRounding { .. } => "ambiguous_rounding",
            Error::Domain(_) => "domain",
            Error::NotSolvableInN(_) => "not_solvable_in_n",
            Error::TooFewMembers(_) => "too_few_members",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::EmptyInput => "empty_input",
            Error::Overflow(_) => "overflow",
            Error::Parse(_) => "parse",
            Error::Verification(_) => "verification",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }

    /// True for errors caused by invalid caller input rather than by the
    /// computation itself.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::NotSolvableInN(_)
                | Error::Parse(_)
                | Error::TooFewMembers(_)
                | Error::InsufficientData { .. }
                | Error::EmptyInput
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
