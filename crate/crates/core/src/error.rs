use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands do not live in the same group, or vectors have the wrong length.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input outside the domain of the operation (empty set, duplicates, h = 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition such as `h > 2k` does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("instance too large: {what} has size {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// The semilinear pipeline only accepts unbounded components; bounded ones
    /// have to go through `decompose_bounded` first so that `k` is explicit.
    #[error("component {index} is bounded; decompose bounded linear sets first")]
    BoundedComponent { index: usize },

    #[error("witness has {size} translates but the bound is {bound}")]
    BoundViolation { size: usize, bound: u128 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("growth table has {len} entries but {needed} are required")]
    TableTooShort { needed: u64, len: usize },
}
