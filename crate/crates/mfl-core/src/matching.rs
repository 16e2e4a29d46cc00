//! Minimum-cost perfect matching between facilities and destination slots.
//!
//! The solver is the O(k³) successive-shortest-path method with dual
//! potentials on `i128` arithmetic. `INF` entries are mapped to a finite
//! surrogate larger than any `INF`-free matching, so "every bijection
//! touches `INF`" is detected by comparing the optimum against the
//! surrogate; in that case the reported cost is `INF` and the assignment
//! is the identity permutation (which then also sums to `INF`).
//!
//! Among equal-cost optima the returned assignment is the
//! lexicographically smallest permutation when `k ≤ 9` (via greedy prefix
//! fixing with re-solves, O(k⁵)); for larger `k` the first-found optimum
//! is returned and only the cost is contractually deterministic.

use crate::cost::{self, Cost, INF};
use crate::error::{Error, Result};
use crate::instance::Instance;

/// Largest matrix size that still gets the lexicographic tie-break.
const LEX_REFINE_MAX_K: usize = 9;

/// A perfect matching and its cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    /// `assignment[i]` is the column (destination slot) matched to row
    /// (facility) `i`; always a bijection on `0..k`.
    pub assignment: Vec<usize>,
    /// Sum of the matched entries, saturating at `INF`.
    pub cost: Cost,
}

/// Minimum-cost perfect matching of a square cost matrix.
///
/// Entries are non-negative costs, possibly `INF`. The cost is the exact
/// minimum over all `k!` bijections (computed in polynomial time); if every
/// bijection uses at least one `INF` entry the cost is `INF`.
pub fn min_cost_perfect_matching(matrix: &[Vec<Cost>]) -> Result<MatchingResult> {
    let k = matrix.len();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != k {
            return Err(Error::InvalidArgument(format!(
                "cost matrix is not square: row {i} has {} entries, expected {k}",
                row.len()
            )));
        }
    }
    if k == 0 {
        return Ok(MatchingResult {
            assignment: Vec::new(),
            cost: 0,
        });
    }

    // Finite surrogate for INF: strictly larger than any INF-free matching
    // (which is at most k * max_finite), so the optimum reaches the
    // surrogate level iff no INF-free bijection exists.
    let max_finite = matrix
        .iter()
        .flatten()
        .copied()
        .filter(|&c| !cost::is_inf(c))
        .max()
        .unwrap_or(0);
    let big = (max_finite as i128) * (k as i128) + 1;
    let surrogate: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|&c| if cost::is_inf(c) { big } else { c as i128 })
                .collect()
        })
        .collect();

    let (mut assignment, surrogate_cost) = solve_surrogate(&surrogate);
    if surrogate_cost >= big {
        // Every bijection touches INF; report the sentinel with the
        // identity assignment (whose cost also saturates to INF).
        return Ok(MatchingResult {
            assignment: (0..k).collect(),
            cost: INF,
        });
    }

    if k <= LEX_REFINE_MAX_K {
        assignment = lex_smallest_optimum(&surrogate, surrogate_cost);
    }

    let cost = cost::sum(assignment.iter().enumerate().map(|(i, &j)| matrix[i][j]));
    Ok(MatchingResult { assignment, cost })
}

/// Successive shortest paths with potentials; returns (row → column
/// assignment, total cost) for a square `i128` matrix with non-negative
/// entries. Deterministic.
fn solve_surrogate(a: &[Vec<i128>]) -> (Vec<usize>, i128) {
    let k = a.len();
    let unreachable = i128::MAX / 4;
    // 1-based arrays; p[j] = row matched to column j, p[0] = row being placed.
    let mut u = vec![0i128; k + 1];
    let mut v = vec![0i128; k + 1];
    let mut p = vec![0usize; k + 1];
    let mut way = vec![0usize; k + 1];
    for i in 1..=k {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![unreachable; k + 1];
        let mut used = vec![false; k + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = unreachable;
            let mut j1 = 0usize;
            for j in 1..=k {
                if used[j] {
                    continue;
                }
                let cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=k {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; k];
    let mut total = 0i128;
    for j in 1..=k {
        assignment[p[j] - 1] = j - 1;
        total += a[p[j] - 1][j - 1];
    }
    (assignment, total)
}

/// Optimal matching cost of the submatrix using `rows`/`cols` (index lists
/// of equal length) — used by the lexicographic refinement re-solves.
fn sub_optimum(a: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> i128 {
    if rows.is_empty() {
        return 0;
    }
    let sub: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| cols.iter().map(|&c| a[r][c]).collect())
        .collect();
    solve_surrogate(&sub).1
}

/// Among all optimal assignments of `a`, return the lexicographically
/// smallest (comparing `assignment[0], assignment[1], ...`). Greedy prefix
/// fixing: for each row in order, commit the smallest column whose entry
/// still admits an optimal completion.
fn lex_smallest_optimum(a: &[Vec<i128>], total: i128) -> Vec<usize> {
    let k = a.len();
    let mut remaining_cols: Vec<usize> = (0..k).collect();
    let mut assignment = vec![0usize; k];
    let mut target = total;
    for i in 0..k {
        let rows: Vec<usize> = (i + 1..k).collect();
        let mut chosen = None;
        for (pos, &j) in remaining_cols.iter().enumerate() {
            let cols: Vec<usize> = remaining_cols
                .iter()
                .copied()
                .filter(|&c| c != j)
                .collect();
            if a[i][j] + sub_optimum(a, &rows, &cols) == target {
                chosen = Some((pos, j));
                break;
            }
        }
        let (pos, j) = chosen.expect("an optimal completion must exist for some column");
        assignment[i] = j;
        target -= a[i][j];
        remaining_cols.remove(pos);
    }
    assignment
}

/// Minimum-cost way of moving all facilities onto the destination set
/// `locations` (one facility per destination). Returns the total weighted
/// movement cost and the per-facility destination vector.
pub fn movement_cost(instance: &Instance, locations: &[usize]) -> Result<(Cost, Vec<usize>)> {
    let k = instance.k();
    if locations.len() != k {
        return Err(Error::InvalidArgument(format!(
            "destination set has {} locations but the instance has {k} facilities",
            locations.len()
        )));
    }
    let matrix: Vec<Vec<Cost>> = (0..k)
        .map(|i| {
            locations
                .iter()
                .map(|&loc| instance.weighted_move_cost(i, loc))
                .collect()
        })
        .collect();
    let result = min_cost_perfect_matching(&matrix)?;
    let destinations = result
        .assignment
        .iter()
        .map(|&slot| locations[slot])
        .collect();
    Ok((result.cost, destinations))
}

/// Like [`movement_cost`] but skips the lexicographic refinement and the
/// destination translation: just the optimal cost. Used on the hot path of
/// candidate-swap evaluation where only the delta matters.
pub fn movement_cost_only(instance: &Instance, locations: &[usize]) -> Result<Cost> {
    let k = instance.k();
    if locations.len() != k {
        return Err(Error::InvalidArgument(format!(
            "destination set has {} locations but the instance has {k} facilities",
            locations.len()
        )));
    }
    let max_finite = (0..k)
        .flat_map(|i| {
            locations
                .iter()
                .map(move |&loc| (i, loc))
        })
        .map(|(i, loc)| instance.weighted_move_cost(i, loc))
        .filter(|&c| !cost::is_inf(c))
        .max()
        .unwrap_or(0);
    let big = (max_finite as i128) * (k as i128) + 1;
    let surrogate: Vec<Vec<i128>> = (0..k)
        .map(|i| {
            locations
                .iter()
                .map(|&loc| {
                    let c = instance.weighted_move_cost(i, loc);
                    if cost::is_inf(c) {
                        big
                    } else {
                        c as i128
                    }
                })
                .collect()
        })
        .collect();
    let (assignment, surrogate_cost) = solve_surrogate(&surrogate);
    if surrogate_cost >= big {
        return Ok(INF);
    }
    Ok(cost::sum(assignment.iter().enumerate().map(|(i, &slot)| {
        instance.weighted_move_cost(i, locations[slot])
    })))
}
