//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by the algebraic kernels.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Evaluation at q = 1 hit a reduced denominator vanishing there.
    #[error("pole at q = 1: reduced denominator vanishes at the classical point")]
    PoleAtOne,

    /// Bounded trial division could not settle a membership question.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// The supplied matrix is not an untwisted affine Cartan matrix.
    #[error("not an affine Cartan matrix: {0}")]
    NotAffine(String),

    /// A vector that was required to be a root is not one.
    #[error("not a root: {0}")]
    NotARoot(String),

    /// A membership predicate does not define a partition of the root system.
    #[error("not a partition: {0}")]
    NotAPartition(String),

    /// A Beck-sequence index fell outside the computed window.
    #[error("index {index} outside Beck window {window}")]
    OutOfWindow { index: i64, window: i64 },

    /// The backtracking search for the map underlying the Beck ordering failed.
    #[error("search exhausted: no valid reflection sequence within the window")]
    SearchExhausted,

    /// A rewrite produced a term above the configured height ceiling.
    #[error("height overflow: term of height {height} exceeds cap {cap}")]
    HeightOverflow { height: u32, cap: u32 },

    /// Completion hit the rule-count cap before reaching a fixpoint.
    #[error("completion stopped at the rule cap ({0} rules)")]
    MaxRules(usize),

    /// A module computation escaped the configured truncation window.
    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),

    /// A level-zero-only operation was invoked at nonzero level.
    #[error("level is not zero: lambda(c) = {0}")]
    LevelNotZero(i64),

    /// Malformed input (CLI, file formats, parsers).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
