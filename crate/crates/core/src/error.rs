use thiserror::Error;

/// Errors shared across the oracle, witness, and scan modules.
#[derive(Debug, Error)]
pub enum Error {
    /// No qualifying value was found below the search limit. This can mean
    /// T(n, m, t) genuinely does not exist at this n, or the limit is too small.
    #[error("no value below {limit} qualifies at n = {n}")]
    NotFoundWithinLimit { n: u64, limit: u64 },

    /// The oracle works in checked 64-bit arithmetic and refuses to continue
    /// past an overflow instead of silently wrapping.
    #[error("64-bit overflow while evaluating power sums (oracle is desk-scale only)")]
    ArithmeticOverflow,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction failed one of its own built-in cross-checks. These are
    /// impossible under the implemented identities; a hit indicates a bug.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
