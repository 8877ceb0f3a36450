use thiserror::Error;

/// Errors surfaced by the engine. The CLI maps these onto its stable exit
/// codes: validation failures are exit 2, mathematical property failures are
/// exit 3, resource bounds are exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a structural invariant (shape, support, signs).
    #[error("validation error: {0}")]
    Validation(String),

    /// A mathematical property that the pipeline relies on does not hold.
    #[error("property failure: {0}")]
    Property(String),

    /// A configured resource bound (monomial cap, search bound) was hit.
    #[error("resource bound exceeded: {0}")]
    Resource(String),

    /// An internal consistency assertion failed. Never silently ignored.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
