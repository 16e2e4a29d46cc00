//! Exact optimum by exhaustive enumeration of destination sets.
//!
//! Every k-subset of the n locations is evaluated exactly (minimum-cost
//! matching for movement plus nearest-destination assignment), and the
//! cheapest is returned. Ties go to the lexicographically smallest subset.
//! The number of subsets is checked against a caller-supplied cap before
//! any work happens, so the call either finishes or refuses up front.

use std::time::Instant;

use rayon::prelude::*;

use crate::cost::{self, Cost};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching;
use crate::solution::{evaluate, Solution};

/// Default cap on the number of enumerated subsets.
pub const DEFAULT_SUBSET_CAP: u64 = 50_000_000;

/// Result of an exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    /// An optimal solution (lexicographically smallest destination set
    /// among optima, facilities matched at minimum cost).
    pub solution: Solution,
    /// Number of k-subsets evaluated (always C(n, k)).
    pub subsets_enumerated: u64,
    /// Wall-clock milliseconds. Excluded from the reproducibility contract.
    pub wall_ms: u128,
}

/// C(n, k) without overflow surprises: saturates at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i + 1) as u128,
            None => return u128::MAX,
        }
    }
    acc
}

/// The `rank`-th k-subset of {0, .., n−1} in lexicographic order.
///
/// Rank 0 is {0, 1, .., k−1}; rank C(n,k)−1 is {n−k, .., n−1}.
pub fn k_subset_unrank(mut rank: u128, n: usize, k: usize) -> Vec<usize> {
    debug_assert!(rank < binomial(n, k));
    let mut subset = Vec::with_capacity(k);
    let mut next = 0usize;
    for remaining in (1..=k).rev() {
        // Advance `next` while skipping blocks of subsets that start with
        // a smaller element.
        loop {
            let block = binomial(n - next - 1, remaining - 1);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        subset.push(next);
        next += 1;
    }
    subset
}

/// Exact total for one destination set, without tie-refined matching.
fn total_for_set(instance: &Instance, set: &[usize]) -> Result<Cost> {
    let movement = matching::movement_cost_only(instance, set)?;
    let assignment = cost::sum(instance.clients().iter().map(|c| {
        let nearest = set
            .iter()
            .map(|&s| instance.assign_dist(c.loc, s))
            .min()
            .expect("destination sets are non-empty");
        cost::mul(c.demand, nearest)
    }));
    Ok(cost::add(movement, assignment))
}

/// Enumerate all C(n, k) destination sets and return an exact optimum.
///
/// Refuses with [`Error::SubsetCapExceeded`] when C(n, k) exceeds
/// `max_subsets`, before evaluating anything.
pub fn brute_force_opt(instance: &Instance, max_subsets: u64, jobs: usize) -> Result<ExactResult> {
    if jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be ≥ 1".into()));
    }
    let started = Instant::now();
    let n = instance.n();
    let k = instance.k();
    let count = binomial(n, k);
    if count > max_subsets as u128 {
        return Err(Error::SubsetCapExceeded {
            n,
            k,
            subsets: count,
            cap: max_subsets,
        });
    }
    let count = count as u64;

    let eval_rank = |rank: u64| -> Result<(Cost, u64)> {
        let set = k_subset_unrank(rank as u128, n, k);
        Ok((total_for_set(instance, &set)?, rank))
    };
    // Minimizing (total, rank) makes the winner the lexicographically
    // smallest optimal subset, independent of evaluation order.
    let best: (Cost, u64) = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
        pool.install(|| {
            (0..count)
                .into_par_iter()
                .map(eval_rank)
                .try_reduce_with(|a, b| Ok(a.min(b)))
                .expect("at least one subset exists")
        })?
    } else {
        let mut best: Option<(Cost, u64)> = None;
        for rank in 0..count {
            let entry = eval_rank(rank)?;
            if best.is_none_or(|b| entry < b) {
                best = Some(entry);
            }
        }
        best.expect("at least one subset exists")
    };

    let winner = k_subset_unrank(best.1 as u128, n, k);
    let (_, destinations) = matching::movement_cost(instance, &winner)?;
    let solution = evaluate(instance, &destinations)?;
    debug_assert_eq!(solution.total, best.0, "re-evaluation must agree with the scan");
    Ok(ExactResult {
        solution,
        subsets_enumerated: count,
        wall_ms: started.elapsed().as_millis(),
    })
}
