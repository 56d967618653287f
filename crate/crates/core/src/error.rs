//! Error type shared across the library.

use crate::projective::ProjPointQ;
use thiserror::Error;

/// Library-wide error enum.
///
/// `Budget`-class errors signal that a requested computation is well defined
/// but exceeds the configured resource limits; they carry enough information
/// for the caller to decide whether to retry with a larger budget.  All other
/// variants indicate invalid input or a violated precondition.
#[derive(Debug, Error)]
pub enum Error {
    /// All coordinates zero, or an empty coordinate vector.
    #[error("not a projective point")]
    NotAProjectivePoint,

    /// A coordinate form has the wrong degree or number of variables.
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    /// Mixed dimensions between a map and a point, or between points.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The coordinate forms have a common zero over the algebraic closure,
    /// so they do not define a morphism.  When a rational common zero was
    /// located it is attached as a witness.
    #[error("common zero detected{}", witness_note(.witness))]
    CommonZero { witness: Option<ProjPointQ> },

    /// The rank test failed to certify the map up to the degree cap.  This is
    /// explicitly *not* a proof of invalidity.
    #[error("no validity certificate found up to degree {max_degree} (not a proof of invalidity)")]
    NoCertificate { max_degree: u32 },

    /// Reduction modulo `p` does not yield a morphism (or `p` is not certified
    /// good by the stored certificate).
    #[error("bad reduction at prime {p}")]
    BadReduction { p: u64 },

    /// An operation that needs degree at least 2 was given a degree-1 map.
    #[error("map degree must be at least 2 for this operation")]
    DegreeTooSmall,

    /// A point that must lie on a given curve does not.
    #[error("point is not on the curve")]
    NotOnCurve,

    /// Discriminant vanishes; the Weierstrass equation is singular.
    #[error("singular curve: discriminant is zero")]
    SingularCurve,

    /// A built-in cross-check against an independent oracle failed.  This
    /// guards against implementation bugs and should never fire.
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    /// An enumeration or search would exceed the configured budget.  The
    /// `required` field reports the size the computation would need.
    #[error("budget exceeded: required about {required}, allowed {allowed}")]
    BudgetExceeded { required: u128, allowed: u128 },

    /// A bounded search ran out of candidates without success.  Not a proof
    /// that no solution exists; a larger radius may succeed.
    #[error("search exhausted at coefficient radius {radius} without a certified candidate")]
    SearchExhausted { radius: u32 },

    /// Field construction failed (not prime, modulus reducible, size cap...).
    #[error("invalid finite field: {0}")]
    InvalidField(String),

    /// Catch-all for malformed user input (parsing, serialization, ranges).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

fn witness_note(w: &Option<ProjPointQ>) -> String {
    match w {
        Some(p) => format!(" (rational common zero at {})", p),
        None => String::new(),
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(format!("json: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
