//! Mobile facility location: solvers and verification.
//!
//! The mobile facility location problem starts from `k` facilities at
//! fixed initial locations and asks for a set `S` of `k` destination
//! locations minimizing the weighted cost of moving the facilities onto
//! `S` (one facility per destination, matched at minimum cost) plus the
//! demand-weighted cost of assigning every client to its nearest
//! destination.
//!
//! This crate provides:
//!
//! * [`instance`] / [`metric`] / [`solution`] — the data model: validated
//!   metric instances with a JSON interchange format, and exact integer
//!   solution evaluation.
//! * [`matching`] — minimum-cost perfect matching (the movement side).
//! * [`evaluator`] — fast candidate-swap deltas via nearest/second-nearest
//!   indices.
//! * [`search`] — multi-swap best-improvement local search with an
//!   epsilon-threshold acceptance rule and local-optimality certification.
//! * [`exact`] — brute-force enumeration of destination sets, the ground
//!   truth for desk-scale experiments.
//! * [`generators`] — random instances, a k-median reduction, and an
//!   adversarial family with an unbounded local-to-global cost ratio.
//! * [`analysis`] — structural decompositions of a (local, reference)
//!   solution pair and per-instance inequality checks with exact integer
//!   slack reporting.
//!
//! All arithmetic is exact: costs are fixed-point `u64` with a reserved
//! `INF` sentinel and saturating semantics, comparisons and slacks use
//! `i128`, and nothing anywhere depends on floating point, so every
//! certificate and every verification verdict is reproducible
//! byte-for-byte.

pub mod analysis;
pub mod cost;
pub mod error;
pub mod evaluator;
pub mod exact;
pub mod generators;
pub mod instance;
pub mod matching;
pub mod metric;
pub mod search;
pub mod solution;

pub use analysis::{verify_all, VerificationReport};
pub use cost::{Cost, INF};
pub use error::{Error, Result};
pub use exact::{brute_force_opt, ExactResult};
pub use generators::{
    gen_kmedian_reduction, gen_locality_gap, gen_random, RandomConfig, RandomModel,
};
pub use instance::{Client, Facility, Instance};
pub use matching::{min_cost_perfect_matching, movement_cost, MatchingResult};
pub use metric::{Metric, MetricViolation};
pub use search::{certify_local_optimum, CertifyReport, InitMode, SearchConfig, SearchOutcome};
pub use solution::{canonicalize_destinations, evaluate, Solution};
