use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient moments: need order {needed}, have order {available}")]
    InsufficientMoments { needed: usize, available: usize },

    /// Positivity breakdown of the moment functional. On the exact path this
    /// means the measure has at most `order` support points; on the
    /// approximate path the working precision ran out.
    #[error("moment functional not positive definite at order {order} ({})",
        if *exact { "support too small" } else { "precision exhausted" })]
    NotPositiveDefinite { order: usize, exact: bool },

    #[error("singular Gram matrix at pivot {pivot} ({})",
        if *exact { "support too small" } else { "precision exhausted" })]
    SingularGram { pivot: usize, exact: bool },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precision-doubling check failed for {context}: relative change {rel_err} at {bits} bits")]
    PrecisionCheck { context: String, rel_err: String, bits: u32 },

    #[error("arithmetic invariant violated: {0}")]
    ArithmeticInvariant(String),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InsufficientMoments { .. } => "E_INSUFFICIENT_MOMENTS",
            Error::NotPositiveDefinite { exact: true, .. } => "E_SUPPORT_TOO_SMALL",
            Error::NotPositiveDefinite { exact: false, .. } => "E_PRECISION_EXHAUSTED",
            Error::SingularGram { exact: true, .. } => "E_SINGULAR_GRAM",
            Error::SingularGram { exact: false, .. } => "E_SINGULAR_GRAM_PRECISION",
            Error::InvalidParameter(_) => "E_INVALID_PARAMETER",
            Error::Domain(_) => "E_DOMAIN",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::PrecisionCheck { .. } => "E_PRECISION_CHECK",
            Error::ArithmeticInvariant(_) => "E_ARITHMETIC_INVARIANT",
            Error::Eigensolver(_) => "E_EIGENSOLVER",
            Error::Parse(_) => "E_PARSE",
        }
    }
}
