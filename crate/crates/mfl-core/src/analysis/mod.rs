//! Paired-solution diagnostics: captures, decomposition, facility
//! classes, and exact inequality checks between a local solution and a
//! reference solution.
//!
//! The entry point is [`verify_all`], which runs every applicable check
//! on a solution pair and returns a [`VerificationReport`]. The pieces
//! are public for callers that want one step at a time: [`pair`] builds
//! the aligned per-slot view, [`decompose`] extracts the path/cycle
//! structure, [`classify`] buckets facilities, [`build_hgraph`] exposes
//! the capture digraph, and the `check_*` functions evaluate individual
//! inequalities in exact integer arithmetic.

pub mod checks;
pub mod classes;
pub mod decompose;
pub mod hgraph;
pub mod paired;
pub mod report;
pub mod verify;

pub use checks::{
    check_cycle_rematch, check_global_ratio, check_reassignment, check_s2_distance,
    check_s2_swap, check_shift_bound,
};
pub use classes::{classify, ClassPartition, ClassVariant, FacilityClass};
pub use decompose::{decompose, Decomposition, Segment};
pub use hgraph::{build_hgraph, HGraph};
pub use paired::{pair, PairedSolutions};
pub use report::{CheckEntry, VerificationReport};
pub use verify::verify_all;
