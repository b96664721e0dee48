use thiserror::Error;

/// Crate-wide error type.
///
/// The variants distinguish "the tool could not finish" (bad prime, overflow,
/// reconstruction failure, undersampling) from "the tool finished and the
/// claim is false" ([`Error::ClaimFailed`]). Callers that produce reports map
/// the former to a configuration/runtime failure and the latter to a negative
/// verification result.
#[derive(Debug, Error)]
pub enum Error {
    /// A denominator reduced to zero modulo the chosen prime.
    #[error("prime {0} divides a denominator in the input")]
    BadPrime(u64),

    /// Rational reconstruction failed, or a reconstructed candidate did not
    /// pass exact re-verification.
    #[error("rational reconstruction failed: {0}")]
    ReconstructionFailed(String),

    /// A sampled evaluation matrix changed rank when extra guard rows were
    /// appended; the sample count is too small to trust the measured rank.
    #[error("undersampled rank in {context}: rank {base_rank} grew to {guard_rank} on guard rows")]
    UndersampledRank {
        context: String,
        base_rank: usize,
        guard_rank: usize,
    },

    /// An argument to a quaternion-only operation had nonzero coordinates
    /// outside the quaternion subalgebra.
    #[error("octonion is not a quaternion: coordinate e{0} is nonzero")]
    NotQuaternion(usize),

    /// A point failed the exact membership equations of the model variety.
    #[error("membership check failed: {0}")]
    MembershipFailed(String),

    /// A computed space had the wrong dimension.
    #[error("unexpected dimension for {what}: expected {expected}, got {got}")]
    UnexpectedDimension {
        what: String,
        expected: usize,
        got: usize,
    },

    /// The advisory floating-point drift check exceeded its tolerance.
    #[error("tolerance exceeded in {what}: worst drift {worst:e} > tol {tol:e}")]
    ToleranceExceeded { what: String, worst: f64, tol: f64 },

    /// A fixed-width integer stage would overflow; the caller should fall
    /// back to big-integer arithmetic or rescale its input.
    #[error("integer overflow in {0}")]
    Overflow(String),

    /// An exact verification pass finished and contradicts the claim.
    #[error("claim failed: {0}")]
    ClaimFailed(String),

    /// Malformed input: unparsable rational, inconsistent shapes, bad flags.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn claim(msg: impl Into<String>) -> Self {
        Error::ClaimFailed(msg.into())
    }
}
