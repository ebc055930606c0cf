//! Shared error type for the solver and toolkit APIs.
//!
//! Most operations can fail in only two or three ways, so a single enum
//! keeps signatures short. Variants that carry a string use it for the
//! human-facing detail (which cap was hit, which index was bad); callers
//! that need to branch should match on the variant, not the message.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two residue vectors (or a vector and a constraint) belong to
    /// different groups.
    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    /// A vector length does not match the instance's variable count.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// The operation needs a single-modulus group but the constraint has
    /// several components. Flatten the instance first.
    #[error("constraint group has more than one component; flatten first")]
    MultiComponentGroup,

    /// A round budget was negative or exceeded its admissible range.
    #[error("invalid round budget: {0}")]
    InvalidRounds(String),

    /// Automatic round selection only works for prime-power moduli.
    #[error("automatic round selection needs a prime-power modulus, got {0}")]
    AutoRoundsUnavailable(u32),

    /// A trial budget below 1.
    #[error("invalid trial budget: {0}")]
    InvalidTrials(i64),

    /// A modulus below 2, or a group whose order overflows the supported
    /// range.
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    /// An enumeration, table, or output would exceed a hard size cap.
    #[error("size cap exceeded: {0}")]
    SizeLimit(String),

    /// The operation requires an odd modulus.
    #[error("modulus {0} is even; this construction needs an odd modulus")]
    EvenModulus(u32),

    /// A claimed prime was composite.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// A polynomial that must have non-negative coefficients has a
    /// negative one.
    #[error("negative coefficient on monomial {0}")]
    NegativeCoefficients(String),

    /// A set system fails one of its structural invariants.
    #[error("invalid set system: {0}")]
    InvalidSystem(String),

    /// A polynomial fails the representation check required here.
    #[error("polynomial is not a valid representation: {0}")]
    InvalidRep(String),

    /// The affine subspace does not meet the weight class in exactly one
    /// point.
    #[error("subspace does not have a unique point in the target weight class")]
    NotUniquePoint,

    /// A reduction that needs a singleton allowed set was handed a larger
    /// one. Callers loop over targets and pass singletons down.
    #[error("allowed set must be a single residue tuple here; loop over targets outside")]
    UnsupportedAllowedSet,

    /// An evaluation point is not drawn from the polynomial's basis
    /// domain, or has the wrong arity.
    #[error("evaluation point does not match the basis: {0}")]
    BasisMismatch(String),

    /// A line of an input file does not match any record production.
    #[error("parse error at line {line}: expected {expected}")]
    ParseError { line: usize, expected: String },

    /// A well-formed line whose content breaks a file-level rule: index
    /// or residue out of range, duplicate or missing header, count
    /// mismatch against the header.
    #[error("invalid input at line {line}: {message}")]
    SemanticError { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
