//! Error type shared across the library.

use crate::metric::MetricViolation;

/// Errors produced while parsing, validating, or solving.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The instance violates a structural requirement (counts, ranges,
    /// duplicate locations, bad scale, ...).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A distance matrix fails symmetry, zero-diagonal, or the triangle
    /// inequality. Only the first few violations are listed.
    #[error("invalid metric ({which}): {}", fmt_violations(.violations))]
    InvalidMetric {
        /// Which matrix failed ("assign" or "move").
        which: &'static str,
        /// Detected violations (possibly truncated).
        violations: Vec<MetricViolation>,
    },

    /// A solution file is inconsistent with the instance it claims to solve.
    #[error("invalid solution: {0}")]
    InvalidSolution(String),

    /// A caller-supplied argument is out of range or malformed.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Exhaustive enumeration would exceed the configured subset cap.
    #[error("exact search refused: C({n},{k}) = {subsets} destination sets exceeds the cap of {cap}")]
    SubsetCapExceeded {
        /// Number of candidate locations.
        n: usize,
        /// Number of facilities.
        k: usize,
        /// Exact number of k-subsets.
        subsets: u128,
        /// Configured ceiling.
        cap: u64,
    },

    /// JSON (de)serialization failure.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

fn fmt_violations(violations: &[MetricViolation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Convenient result alias for library operations.
pub type Result<T> = std::result::Result<T, Error>;
