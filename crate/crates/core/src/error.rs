//! Error type shared by every module in this crate.
//!
//! All fallible operations return [`Result`]. Variants carry the offending
//! numbers so callers can report actionable messages without re-deriving
//! them; tolerances that were compared against are included where relevant.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scale factor was below the smallest meaningful value.
    #[error("scale factor {scale} is invalid; need at least {min}")]
    InvalidScale { scale: usize, min: usize },

    /// A word letter (digit) was not in `0..scale`.
    #[error("letter {letter} out of range for scale {scale} (letters must lie in 0..{scale})")]
    LetterOutOfRange { letter: usize, scale: usize },

    /// Evaluation was requested at a point off the unit circle.
    #[error("evaluation point has modulus {modulus}, not 1 within {tol}")]
    OffUnitCircle { modulus: f64, tol: f64 },

    /// A word enumeration would exceed the configured leaf cap.
    #[error(
        "enumeration needs {required} words of the requested length, which exceeds the cap {cap}"
    )]
    WordCapExceeded { required: u128, cap: u128 },

    /// A measure iteration would exceed the configured atom cap.
    #[error("iteration needs {required} atoms, which exceeds the cap {cap}")]
    AtomCapExceeded { required: u128, cap: u128 },

    /// An operation that requires a unit vector received something else.
    #[error("vector has norm {norm}, not 1 within {tol}")]
    NotUnitNorm { norm: f64, tol: f64 },

    /// An affine system had a branch with slope magnitude at least 1.
    #[error("system is not strictly contractive: max |slope| = {max_slope}")]
    NotContractive { max_slope: f64 },

    /// A branch probability was zero or negative.
    #[error("branch probability {value} at index {index} is not strictly positive")]
    NonPositiveProbability { index: usize, value: f64 },

    /// Branch probabilities did not sum to one.
    #[error("branch probabilities sum to {sum}, not 1 within {tol}")]
    ProbabilitySum { sum: f64, tol: f64 },

    /// A constructed or mapped atom left the half-open unit interval.
    #[error("atom position {x} lies outside [0, 1)")]
    AtomOutsideDomain { x: f64 },

    /// An atom carried a negative weight.
    #[error("atom weight {w} is negative")]
    NegativeWeight { w: f64 },

    /// A NaN or infinity appeared where a finite number is required.
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    /// A filter bank was built with the wrong number of filters.
    #[error("filter bank with scale {expected} needs {expected} filters, got {got}")]
    FilterCountMismatch { expected: usize, got: usize },

    /// Two per-branch collections disagreed in length.
    #[error("expected {expected} branches, got {got}")]
    BranchCountMismatch { expected: usize, got: usize },

    /// A system was constructed with no branches at all.
    #[error("{what} must have at least one branch")]
    EmptySystem { what: &'static str },

    /// A recursion depth was below the smallest meaningful value.
    #[error("depth {got} is invalid; need at least {min}")]
    InvalidDepth { got: u32, min: u32 },

    /// The branch pushforward identity, which holds exactly when the
    /// operators satisfy the Cuntz relations, failed at working precision.
    /// Diagnostics refuse to interpret results built on broken operators.
    #[error("branch {branch} pushforward identity residual {residual} exceeds {tol}; refusing to diagnose with inconsistent operators")]
    PushforwardIdentity {
        branch: usize,
        residual: f64,
        tol: f64,
    },

    /// A vector passed as a joint eigenvector of the adjoint operators
    /// failed the eigen equation on some branch.
    #[error("not a joint eigenvector: branch {branch} residual {residual} exceeds {tol}")]
    NotJointEigenvector {
        branch: usize,
        residual: f64,
        tol: f64,
    },
}
