//! Fast exact evaluation of candidate swap moves.
//!
//! A [`NearestIndex`] caches each client's nearest and second-nearest
//! destination (by distance, ties toward the lower location index — the
//! same order the rest of the crate uses). For a candidate swap removing
//! `X` and inserting `Y`, the assignment delta of a client needs only the
//! cached pair and the distances to `Y`, except in the rare case where
//! both cached locations leave the set, which falls back to a rescan.
//! Movement deltas always re-solve the k x k matching: swaps can reshuffle
//! the optimal matching globally, so no warm-start shortcut is taken.

use crate::cost::{self, Cost, INF};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching;
use crate::solution::Solution;

/// Sentinel location index meaning "no second-nearest exists" (k = 1).
pub const NO_LOCATION: usize = usize::MAX;

/// Per-client nearest / second-nearest destinations for one solution
/// snapshot. Immutable; applying a move produces a fresh value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestIndex {
    /// Ascending destination set this index was built for.
    set: Vec<usize>,
    /// Per client: (nearest location, distance).
    nearest: Vec<(usize, Cost)>,
    /// Per client: (second-nearest location, distance); sentinel when k=1.
    second: Vec<(usize, Cost)>,
}

impl NearestIndex {
    /// The destination set the index reflects (ascending).
    pub fn set(&self) -> &[usize] {
        &self.set
    }

    /// Nearest destination and distance for client `j`.
    pub fn nearest(&self, j: usize) -> (usize, Cost) {
        self.nearest[j]
    }

    /// Second-nearest destination and distance for client `j`
    /// (`NO_LOCATION`/`INF` when the set has a single location).
    pub fn second(&self, j: usize) -> (usize, Cost) {
        self.second[j]
    }
}

/// Top-two locations of `set` by `(distance to loc, location index)`.
fn top_two(instance: &Instance, set: &[usize], loc: usize) -> ((usize, Cost), (usize, Cost)) {
    let mut best = (NO_LOCATION, INF);
    let mut second = (NO_LOCATION, INF);
    for &s in set {
        let d = instance.assign_dist(loc, s);
        // Scanning in ascending location order, strict inequality keeps
        // the lowest index in front on distance ties.
        if d < best.1 {
            second = best;
            best = (s, d);
        } else if d < second.1 {
            second = (s, d);
        }
    }
    (best, second)
}

/// Build the index for a destination set (any order; stored ascending).
pub fn build_index(instance: &Instance, set: &[usize]) -> Result<NearestIndex> {
    if set.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot index an empty destination set".into(),
        ));
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(Error::InvalidArgument(
            "destination set contains duplicates".into(),
        ));
    }
    let mut nearest = Vec::with_capacity(instance.clients().len());
    let mut second = Vec::with_capacity(instance.clients().len());
    for client in instance.clients() {
        let (b, s) = top_two(instance, &sorted, client.loc);
        nearest.push(b);
        second.push(s);
    }
    Ok(NearestIndex {
        set: sorted,
        nearest,
        second,
    })
}

/// A candidate swap: remove `swap_out` from the destination set, insert
/// `swap_in`, with the exact total-cost change. Ordering is by
/// `(delta, swap_out, swap_in)`, the tie-break used for move selection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SwapMove {
    /// Most-negative-first comparison key: exact total change.
    pub delta: i128,
    /// Locations leaving the set (ascending, subset of the current set).
    pub swap_out: Vec<usize>,
    /// Locations entering the set (ascending, disjoint from the set).
    pub swap_in: Vec<usize>,
}

/// Validate swap shape against the current set; returns the new set.
fn swapped_set(current: &[usize], x: &[usize], y: &[usize]) -> Result<Vec<usize>> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "swap sides differ in size: {} out vs {} in",
            x.len(),
            y.len()
        )));
    }
    for w in x.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArgument("swap-out side must be strictly ascending".into()));
        }
    }
    for w in y.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArgument("swap-in side must be strictly ascending".into()));
        }
    }
    for loc in x {
        if current.binary_search(loc).is_err() {
            return Err(Error::InvalidArgument(format!(
                "swap-out location {loc} is not in the current destination set"
            )));
        }
    }
    for loc in y {
        if current.binary_search(loc).is_ok() {
            return Err(Error::InvalidArgument(format!(
                "swap-in location {loc} is already in the destination set"
            )));
        }
    }
    let mut new_set: Vec<usize> = current
        .iter()
        .copied()
        .filter(|loc| x.binary_search(loc).is_err())
        .chain(y.iter().copied())
        .collect();
    new_set.sort_unstable();
    Ok(new_set)
}

/// Exact assignment cost of the swapped set, using the index for all
/// clients whose cached locations survive.
fn assignment_cost_after(
    instance: &Instance,
    index: &NearestIndex,
    x: &[usize],
    y: &[usize],
    new_set: &[usize],
) -> Cost {
    let mut total: Cost = 0;
    for (j, client) in instance.clients().iter().enumerate() {
        let (n_loc, n_d) = index.nearest[j];
        let (s_loc, s_d) = index.second[j];
        let surviving = if x.binary_search(&n_loc).is_err() {
            // Nearest survives: it is still the minimum over the old set
            // minus X.
            n_d
        } else if s_loc != NO_LOCATION && x.binary_search(&s_loc).is_err() {
            // Nearest left but second survives: second is the minimum over
            // the old set minus X.
            s_d
        } else {
            // Both cached locations left the set; rescan what remains.
            let mut best = INF;
            for &s in new_set {
                if y.binary_search(&s).is_ok() {
                    continue; // counted below
                }
                let d = instance.assign_dist(client.loc, s);
                if d < best {
                    best = d;
                }
            }
            best
        };
        let mut best = surviving;
        for &v in y {
            let d = instance.assign_dist(client.loc, v);
            if d < best {
                best = d;
            }
        }
        total = cost::add(total, cost::mul(client.demand, best));
    }
    total
}

/// Evaluate the exact total-cost delta of `swap(x, y)` against the current
/// solution. `x`/`y` must be ascending, `x` inside the current set, `y`
/// outside, equal sizes (both may be empty, giving delta 0).
pub fn evaluate_swap(
    instance: &Instance,
    current: &Solution,
    index: &NearestIndex,
    x: &[usize],
    y: &[usize],
) -> Result<SwapMove> {
    let new_set = swapped_set(index.set(), x, y)?;
    if x.is_empty() {
        return Ok(SwapMove {
            delta: 0,
            swap_out: Vec::new(),
            swap_in: Vec::new(),
        });
    }
    let new_matching = matching::movement_cost_only(instance, &new_set)?;
    let new_assignment = assignment_cost_after(instance, index, x, y, &new_set);
    let new_total = cost::add(new_matching, new_assignment);
    let delta = new_total as i128 - current.total as i128;
    Ok(SwapMove {
        delta,
        swap_out: x.to_vec(),
        swap_in: y.to_vec(),
    })
}

/// Apply a swap: fully re-evaluate the swapped set (with an optimally
/// re-matched destination vector) and update the index incrementally.
/// Returns the new solution and its index.
pub fn apply_swap(
    instance: &Instance,
    index: &NearestIndex,
    x: &[usize],
    y: &[usize],
) -> Result<(Solution, NearestIndex)> {
    let new_set = swapped_set(index.set(), x, y)?;
    let (_, destinations) = matching::movement_cost(instance, &new_set)?;
    let solution = crate::solution::evaluate(instance, &destinations)?;

    let mut nearest = Vec::with_capacity(instance.clients().len());
    let mut second = Vec::with_capacity(instance.clients().len());
    for (j, client) in instance.clients().iter().enumerate() {
        let (n_loc, _) = index.nearest[j];
        let (s_loc, _) = index.second[j];
        let nearest_gone = x.binary_search(&n_loc).is_ok();
        let second_gone = s_loc == NO_LOCATION || x.binary_search(&s_loc).is_ok();
        if nearest_gone || second_gone {
            // A cached slot is invalid; rebuild this client from scratch.
            let (b, s) = top_two(instance, &new_set, client.loc);
            nearest.push(b);
            second.push(s);
        } else {
            // Both cached locations survive: merge the insertions into the
            // cached top-two, comparing by (distance, location).
            let mut best = index.nearest[j];
            let mut runner = index.second[j];
            for &v in y {
                let cand = (v, instance.assign_dist(client.loc, v));
                let key = (cand.1, cand.0);
                if key < (best.1, best.0) {
                    runner = best;
                    best = cand;
                } else if key < (runner.1, runner.0) {
                    runner = cand;
                }
            }
            nearest.push(best);
            second.push(runner);
        }
    }
    let new_index = NearestIndex {
        set: new_set,
        nearest,
        second,
    };
    Ok((solution, new_index))
}
