//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// The split matters for the CLI: parameter and dimension problems are usage
/// errors (exit code 2), while a failed identity check is reported through the
/// suite machinery (exit code 1), never through this enum.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its documented domain (`p = 0`, `r = 0` where a
    /// squeezed frame is required, negative tolerance, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Dimension or guard band out of range (`dim < 4`, `guard == 0`,
    /// `guard >= dim`).
    #[error("invalid dimensions: dim = {dim}, guard = {guard} ({detail})")]
    InvalidDimensions {
        dim: usize,
        guard: usize,
        detail: String,
    },

    /// The requested computation would push significant amplitude into the
    /// truncated tail of the Fock space. `required` is a dimension estimate
    /// that would make the same call succeed.
    #[error("truncated Fock space too small: {detail}; a dimension of at least {required} should suffice")]
    TruncationInadequate { required: usize, detail: String },

    /// A NaN or infinity appeared where a finite number was required.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// A computation finished but failed its own accuracy budget — for
    /// example a unitary flow whose norm drifted by more than the integrator
    /// tolerance allows. The result is not returned because it cannot be
    /// trusted.
    #[error("accuracy budget exceeded: {what} measured {measured:.3e}, budget {budget:.3e}")]
    AccuracyLoss {
        what: String,
        measured: f64,
        budget: f64,
    },

    /// The adaptive integrator could not meet its error target even at the
    /// smallest representable step size.
    #[error("adaptive step size underflow at t = {t:.6e}")]
    StepSizeUnderflow { t: f64 },

    /// A series manipulation ran out of retained orders even after internal
    /// retries. Indicates a bug rather than a user error.
    #[error("formal series truncation exhausted at order {order}: {detail}")]
    SeriesTruncation { order: usize, detail: String },

    /// A linear solve met a pivot too small to trust (singular or nearly
    /// singular system).
    #[error("linear solve failed: {0}")]
    SingularMatrix(String),

    /// An I/O problem while writing requested output.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
