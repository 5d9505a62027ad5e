//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library.
///
/// The CLI maps `PrecisionExhausted`, `Unresolved`, `NotStabilizing` and
/// `ZeroRunTooLarge` to exit code 2 (the computation is well-posed but the
/// requested certificate is out of reach at the configured budget); all
/// other variants are invalid-input errors and map to exit code 3.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The denominator shares a factor with the reduction prime.
    #[error("denominator is divisible by {prime}, not invertible")]
    DenominatorNotInvertible { prime: u8 },

    /// An enclosure refinement hit the precision cap before deciding.
    #[error("precision cap of {cap_bits} bits exhausted before the quantity was decided")]
    PrecisionExhausted { cap_bits: u32 },

    /// The map T is only defined on rationals with odd denominator.
    #[error("denominator is even, the map is not defined here")]
    EvenDenominator,

    /// A slope parameter was outside its admissible range or malformed.
    #[error("invalid slope: {0}")]
    InvalidSlope(String),

    /// Interval endpoints out of range or out of order.
    #[error("invalid interval: {0}")]
    InvalidInterval(String),

    /// The engineered-word constructor was asked for a zero run so long the
    /// compensating one run would be empty or negative.
    #[error("zero run of factor {factor} too large, compensating one run would be {m}")]
    ZeroRunTooLarge { factor: u64, m: i64 },

    /// A window-certified quantity could not be certified inside the window.
    #[error("unresolved within scan window: {0}")]
    Unresolved(String),

    /// A 3-adic digit did not stabilize across the supplied word family.
    #[error("3-adic digit {digit} did not stabilize (family exhausted after prefix length {prefix_len})")]
    NotStabilizing { digit: u32, prefix_len: u64 },

    /// A residue chain is not compatible with a single p-adic integer.
    #[error("residue chain incompatible at index {index}")]
    IncompatibleChain { index: usize },

    /// The requested slope is at or above the critical value.
    #[error("slope too large: {0}")]
    SlopeTooLarge(String),

    /// A word literal could not be parsed.
    #[error("invalid word literal: {0}")]
    ParseWord(String),

    /// A rational literal could not be parsed.
    #[error("invalid rational literal: {0}")]
    ParseRational(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DenominatorNotInvertible { .. } => "denominator-not-invertible",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::EvenDenominator => "even-denominator",
            Error::InvalidSlope(_) => "invalid-slope",
            Error::InvalidInterval(_) => "invalid-interval",
            Error::ZeroRunTooLarge { .. } => "zero-run-too-large",
            Error::Unresolved(_) => "unresolved",
            Error::NotStabilizing { .. } => "not-stabilizing",
            Error::IncompatibleChain { .. } => "incompatible-chain",
            Error::SlopeTooLarge(_) => "slope-too-large",
            Error::ParseWord(_) => "parse-word",
            Error::ParseRational(_) => "parse-rational",
        }
    }

    /// True for "budget" errors: the input was valid but the requested
    /// certificate was not reachable within the configured limits.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. }
                | Error::Unresolved(_)
                | Error::NotStabilizing { .. }
                | Error::ZeroRunTooLarge { .. }
        )
    }
}
