//! Facility classification by capture count and captured demand.
//!
//! Given a decomposed solution pair and a threshold parameter `t ≥ 2`,
//! each local destination falls into one of three classes: `S0` captures
//! nothing, `S1` captures either many destinations or little demand, and
//! `S2` captures few destinations carrying heavy demand. `S3 ⊆ S0 ∪ S1`
//! collects the facilities whose capture count stays within `t`.
//!
//! Two center conventions are supported and must be kept apart, because
//! the inequality checks downstream are stated against a specific one:
//!
//! * [`ClassVariant::PathDecomposition`] takes `cent(s)` from the
//!   path/cycle decomposition (the in-segment predecessor) and compares
//!   the captured demand of that single center against `t`.
//! * [`ClassVariant::CaptureBased`] takes `cent(s)` as the captured
//!   destination closest to `s` and compares the demand over *all*
//!   captured destinations against `max{w_i, w_{i'}} · t`, where `w_i`
//!   is the facility's own weight and `w_{i'}` the weight of the slot
//!   owning the center. For unit weights the threshold reduces to `t`.
//!
//! All demand sums are demand-weighted (a client of demand `d` counts
//! `d` times) and computed in 128-bit integers, so classification is
//! exact for any representable instance.

use crate::analysis::decompose::Decomposition;
use crate::analysis::paired::PairedSolutions;
use crate::error::{Error, Result};

/// Which center convention and demand threshold the partition uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassVariant {
    /// Centers from the path/cycle decomposition; threshold `t`.
    PathDecomposition,
    /// Centers by proximity among captures; threshold scaled by weights.
    CaptureBased,
}

impl ClassVariant {
    /// Stable label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            ClassVariant::PathDecomposition => "path-decomposition",
            ClassVariant::CaptureBased => "capture-based",
        }
    }
}

/// The class of one facility slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FacilityClass {
    S0,
    S1,
    S2,
}

/// Exhaustive, disjoint classification of the local destinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPartition {
    /// Threshold parameter, at least 2.
    pub t: u64,
    /// Center convention this partition was built under.
    pub variant: ClassVariant,
    /// Class of each slot.
    pub class_of: Vec<FacilityClass>,
    /// Slots per class, ascending. `s3` overlaps `s0` and `s1`.
    pub s0: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s3: Vec<usize>,
    /// Variant-specific center o-slot per slot; `None` exactly on `S0`.
    pub cent: Vec<Option<usize>>,
    /// Captured o-slots per slot, copied from the decomposition.
    pub capt: Vec<Vec<usize>>,
}

/// Demand captured by slot `i`: the demand-weighted size of the union of
/// `D*(o_j)` over its captured o-slots `j`.
fn captured_demand(paired: &PairedSolutions, capt: &[usize]) -> u128 {
    capt.iter().map(|&j| paired.n_star[j]).sum()
}

/// Classify every local destination under the given variant.
pub fn classify(
    paired: &PairedSolutions,
    decomposition: &Decomposition,
    t: u64,
    variant: ClassVariant,
) -> Result<ClassPartition> {
    if t < 2 {
        return Err(Error::InvalidArgument(format!(
            "classification threshold t must be at least 2, got {t}"
        )));
    }
    let k = paired.k();
    let inst = paired.instance();

    let cent: Vec<Option<usize>> = match variant {
        ClassVariant::PathDecomposition => decomposition.cent.clone(),
        ClassVariant::CaptureBased => (0..k)
            .map(|i| {
                decomposition.capt[i]
                    .iter()
                    .copied()
                    .min_by_key(|&j| {
                        (inst.assign_dist(paired.s_loc(i), paired.o_loc(j)), paired.o_loc(j))
                    })
            })
            .collect(),
    };

    let mut class_of = Vec::with_capacity(k);
    for (i, capt) in decomposition.capt.iter().enumerate() {
        if capt.is_empty() {
            class_of.push(FacilityClass::S0);
            continue;
        }
        let many_captures = capt.len() as u64 > t;
        let light_demand = match variant {
            ClassVariant::PathDecomposition => {
                let c = cent[i].expect("non-empty capture set implies a center");
                paired.n_star[c] <= t as u128
            }
            ClassVariant::CaptureBased => {
                let c = cent[i].expect("non-empty capture set implies a center");
                let w_own = inst.facilities()[i].weight;
                let w_cent = inst.facilities()[c].weight;
                let threshold = (w_own.max(w_cent) as u128) * (t as u128);
                captured_demand(paired, capt) <= threshold
            }
        };
        if many_captures || light_demand {
            class_of.push(FacilityClass::S1);
        } else {
            class_of.push(FacilityClass::S2);
        }
    }

    let slots_in = |class: FacilityClass| -> Vec<usize> {
        (0..k).filter(|&i| class_of[i] == class).collect()
    };
    let s0 = slots_in(FacilityClass::S0);
    let s1 = slots_in(FacilityClass::S1);
    let s2 = slots_in(FacilityClass::S2);
    let s3: Vec<usize> = (0..k)
        .filter(|&i| match class_of[i] {
            FacilityClass::S0 => true,
            FacilityClass::S1 => decomposition.capt[i].len() as u64 <= t,
            FacilityClass::S2 => false,
        })
        .collect();

    Ok(ClassPartition {
        t,
        variant,
        class_of,
        s0,
        s1,
        s2,
        s3,
        cent,
        capt: decomposition.capt.clone(),
    })
}
