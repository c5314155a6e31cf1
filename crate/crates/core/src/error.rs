use thiserror::Error;

/// Crate-wide error type. Violations discovered by the BD checker are not
/// errors; they are entries in the returned report.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an operation's arguments failed.
    #[error("domain error: {0}")]
    Domain(String),

    /// A manifest or spec failed its load-time validation.
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    /// A complex would exceed the configured basis budget.
    #[error("size budget exceeded: complex needs {needed} basis elements, budget is {budget}")]
    SizeBudget { needed: usize, budget: usize },

    /// A cover failed the factorization gate; carries a witness point set.
    #[error("cover is not factorizing: no pairwise-disjoint subfamily covers the points {witness:?}")]
    NotFactorizing { witness: Vec<String> },

    /// The grid of a sub-basis is too coarse to cover the requested open.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// witten_limit_check requires ch_2 = 0; carries the offending class.
    #[error("limit check precondition failed: ch_2 = {ch2} is nonzero")]
    Ch2NotTrivial { ch2: String },

    /// A bracket or product escaped the truncation window where an exact
    /// statement was required.
    #[error("truncation window violated: {0}")]
    Window(String),
}

pub type Result<T> = std::result::Result<T, Error>;
