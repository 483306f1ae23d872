use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A localization weight vanished in a denominator.
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("series is not invertible: {0}")]
    NonUnitSeries(String),

    #[error("q-Pochhammer argument has degree zero; the product does not converge")]
    NonConvergent,

    /// The Shapovalov form is singular at this level (Kac determinant vanishes).
    #[error("singular Gram matrix at level {level}")]
    SingularGram { level: usize },

    #[error("tail cancellation failed in {0}")]
    TailMismatch(String),

    #[error("cross-check failed for {what}: {left} != {right}")]
    CrossCheckFailure {
        what: String,
        left: String,
        right: String,
    },

    #[error("block at degree {requested} exceeds truncation bound {bound}")]
    TruncationExceeded { requested: usize, bound: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
