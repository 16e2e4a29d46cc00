//! Multi-swap best-improvement local search with exact certification.
//!
//! Each iteration enumerates every candidate swap of up to `rho` locations
//! (remove `X` from the current destination set, insert `Y` from outside),
//! evaluates all of them exactly, and applies the best strictly-improving
//! move that clears the epsilon threshold: a move is accepted when
//! `delta < 0` and `(-delta) >= eps * total_before`, with
//! `eps = eps_num / eps_den` compared in exact integer cross-multiplied
//! form. With `eps = 0` every strict improvement qualifies, totals are
//! integers, and termination is guaranteed; the final barren scan then
//! doubles as a local-optimality certificate.
//!
//! Ties between equally-improving moves go to the lexicographically
//! smallest `(sorted X, sorted Y)`, making traces reproducible
//! byte-for-byte; parallel scans reduce over a totally ordered key, so
//! `jobs > 1` returns exactly the serial result.

use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cost::{self, Cost};
use crate::error::{Error, Result};
use crate::evaluator::{self, NearestIndex, SwapMove};
use crate::instance::Instance;
use crate::matching;
use crate::solution::{evaluate, Solution};

/// How the initial destination set is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitMode {
    /// Facilities stay at their initial locations (movement cost 0 when
    /// those are distinct).
    AtInitial,
    /// A uniformly random k-subset of locations, drawn from the seed.
    RandomK,
    /// Iteratively add the location that most reduces the total assignment
    /// cost (ties to the lowest index), then match facilities onto the
    /// result. Movement cost is ignored during the picks.
    Greedy,
    /// An explicit destination set (k distinct locations, any order).
    Explicit(Vec<usize>),
}

/// Local-search configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum swap size (≥ 1; clamped to min(k, n−k) at runtime).
    pub rho: usize,
    /// Epsilon threshold numerator (0 accepts any strict improvement).
    pub eps_num: u32,
    /// Epsilon threshold denominator (≥ 1).
    pub eps_den: u32,
    /// Initial destination set.
    pub init: InitMode,
    /// Seed for randomized initialization.
    pub seed: u64,
    /// Iteration cap; hitting it leaves the result uncertified.
    pub max_iters: u64,
    /// Worker threads for the neighborhood scan (1 = serial).
    pub jobs: usize,
    /// Apply the lexicographically first improving move instead of the
    /// best one. Benchmarking aid: outcomes are never marked certified.
    pub first_improvement: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            rho: 1,
            eps_num: 0,
            eps_den: 1,
            init: InitMode::AtInitial,
            seed: 0,
            max_iters: 10_000,
            jobs: 1,
            first_improvement: false,
        }
    }
}

/// One applied move in the search trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationRecord {
    /// 1-based iteration number.
    pub iter: u64,
    /// Exact total-cost change of the applied move (negative).
    pub delta: i128,
    /// Total before the move.
    pub total_before: Cost,
    /// Total after the move.
    pub total_after: Cost,
    /// Locations removed.
    pub swap_out: Vec<usize>,
    /// Locations inserted.
    pub swap_in: Vec<usize>,
    /// Candidates evaluated this iteration (the full neighborhood in
    /// best-improvement mode; possibly fewer under first-improvement).
    pub candidates: u64,
    /// Wall-clock milliseconds spent on this iteration. Excluded from the
    /// reproducibility contract.
    pub millis: u128,
}

/// Result of a search run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Final solution.
    pub solution: Solution,
    /// Applied moves in order.
    pub trace: Vec<IterationRecord>,
    /// `true` iff the final scan proved no strictly improving move exists
    /// (never set in first-improvement mode; run certification separately).
    pub certified: bool,
    /// `true` iff the iteration cap stopped the search.
    pub hit_iteration_cap: bool,
    /// Swap size actually used after clamping to min(k, n−k).
    pub rho_used: usize,
    /// Number of applied moves.
    pub iterations: u64,
}

/// Local-optimality certificate from a full neighborhood scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyReport {
    /// Requested swap size.
    pub rho_requested: usize,
    /// Swap size after clamping.
    pub rho_used: usize,
    /// Candidates scanned.
    pub candidates: u64,
    /// Most negative delta over the neighborhood (`None` when there are no
    /// candidates at all).
    pub min_delta: Option<i128>,
    /// The move attaining `min_delta`.
    pub best: Option<SwapMove>,
    /// `true` iff no candidate has a negative delta.
    pub certified: bool,
}

/// Number of candidate swaps: Σ_{q=1..rho} C(k,q)·C(n−k,q).
pub fn candidate_count(k: usize, outside: usize, rho: usize) -> u128 {
    fn binom(n: usize, q: usize) -> u128 {
        if q > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..q {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc
    }
    (1..=rho).map(|q| binom(k, q) * binom(outside, q)).sum()
}

/// Acceptance rule: strict improvement clearing the epsilon threshold.
#[inline]
fn meets_threshold(delta: i128, total_before: Cost, eps_num: u32, eps_den: u32) -> bool {
    if delta >= 0 {
        return false;
    }
    let gain = (-delta) as u128;
    gain * eps_den as u128 >= eps_num as u128 * total_before as u128
}

fn validate_config(config: &SearchConfig) -> Result<()> {
    if config.rho == 0 {
        return Err(Error::InvalidArgument("swap size rho must be ≥ 1".into()));
    }
    if config.eps_den == 0 {
        return Err(Error::InvalidArgument("epsilon denominator must be ≥ 1".into()));
    }
    if config.max_iters == 0 {
        return Err(Error::InvalidArgument("iteration cap must be ≥ 1".into()));
    }
    if config.jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be ≥ 1".into()));
    }
    Ok(())
}

/// Clamp the swap size to what the instance supports.
pub fn clamp_rho(instance: &Instance, rho: usize) -> usize {
    rho.min(instance.k()).min(instance.n() - instance.k())
}

/// Compute the initial destination vector for a configuration. Randomized
/// and greedy sets are matched onto facilities at minimum cost.
pub fn initial_destinations(instance: &Instance, config: &SearchConfig) -> Result<Vec<usize>> {
    let n = instance.n();
    let k = instance.k();
    match &config.init {
        InitMode::AtInitial => Ok(instance.facilities().iter().map(|f| f.loc).collect()),
        InitMode::RandomK => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut locs: Vec<usize> = (0..n).collect();
            for i in 0..k {
                let j = i + rng.gen_range(0..n - i);
                locs.swap(i, j);
            }
            let mut set = locs[..k].to_vec();
            set.sort_unstable();
            let (_, dests) = matching::movement_cost(instance, &set)?;
            Ok(dests)
        }
        InitMode::Greedy => {
            let mut chosen: Vec<usize> = Vec::with_capacity(k);
            let mut best_dist: Vec<Cost> = vec![crate::cost::INF; instance.clients().len()];
            for _ in 0..k {
                let mut pick: Option<(Cost, usize)> = None;
                for v in 0..n {
                    if chosen.contains(&v) {
                        continue;
                    }
                    let total = cost::sum(instance.clients().iter().enumerate().map(|(j, c)| {
                        cost::mul(c.demand, best_dist[j].min(instance.assign_dist(c.loc, v)))
                    }));
                    // Strict < keeps the lowest-index location on ties.
                    if pick.is_none_or(|(best, _)| total < best) {
                        pick = Some((total, v));
                    }
                }
                let (_, v) = pick.expect("k ≤ n leaves a location to pick");
                for (j, c) in instance.clients().iter().enumerate() {
                    best_dist[j] = best_dist[j].min(instance.assign_dist(c.loc, v));
                }
                chosen.push(v);
            }
            chosen.sort_unstable();
            let (_, dests) = matching::movement_cost(instance, &chosen)?;
            Ok(dests)
        }
        InitMode::Explicit(locs) => {
            if locs.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "explicit initial set has {} locations but k = {k}",
                    locs.len()
                )));
            }
            let mut set = locs.clone();
            set.sort_unstable();
            set.dedup();
            if set.len() != k {
                return Err(Error::InvalidArgument(
                    "explicit initial set contains duplicates".into(),
                ));
            }
            if let Some(&bad) = set.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidArgument(format!(
                    "explicit initial location {bad} is outside 0..{n}"
                )));
            }
            let (_, dests) = matching::movement_cost(instance, &set)?;
            Ok(dests)
        }
    }
}

/// All candidate sides for one scan: (X, Y) pairs in lexicographic
/// (|X|, X, Y) order.
fn candidate_pairs(set: &[usize], outside: &[usize], rho: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut pairs = Vec::new();
    for q in 1..=rho {
        for x in set.iter().copied().combinations(q) {
            for y in outside.iter().copied().combinations(q) {
                pairs.push((x.clone(), y));
            }
        }
    }
    pairs
}

/// Full scan: best move overall (by (delta, X, Y)), plus candidate count.
fn scan_best(
    instance: &Instance,
    solution: &Solution,
    index: &NearestIndex,
    rho: usize,
    jobs: usize,
) -> Result<(Option<SwapMove>, u64)> {
    let set = index.set().to_vec();
    let outside: Vec<usize> = (0..instance.n())
        .filter(|v| set.binary_search(v).is_err())
        .collect();
    let pairs = candidate_pairs(&set, &outside, rho);
    let count = pairs.len() as u64;
    debug_assert_eq!(
        count as u128,
        candidate_count(set.len(), outside.len(), rho),
        "neighborhood enumeration must be complete"
    );
    let best = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build thread pool: {e}")))?;
        pool.install(|| {
            pairs
                .par_iter()
                .map(|(x, y)| evaluator::evaluate_swap(instance, solution, index, x, y))
                .try_reduce_with(|a, b| Ok(a.min(b)))
                .transpose()
        })?
    } else {
        let mut best: Option<SwapMove> = None;
        for (x, y) in &pairs {
            let mv = evaluator::evaluate_swap(instance, solution, index, x, y)?;
            if best.as_ref().is_none_or(|b| mv < *b) {
                best = Some(mv);
            }
        }
        best
    };
    Ok((best, count))
}

/// Lazy scan: the lexicographically first move meeting the threshold, or
/// (None, full min) after scanning everything.
fn scan_first(
    instance: &Instance,
    solution: &Solution,
    index: &NearestIndex,
    rho: usize,
    eps_num: u32,
    eps_den: u32,
) -> Result<(Option<SwapMove>, Option<i128>, u64)> {
    let set = index.set().to_vec();
    let outside: Vec<usize> = (0..instance.n())
        .filter(|v| set.binary_search(v).is_err())
        .collect();
    let mut evaluated = 0u64;
    let mut min_delta: Option<i128> = None;
    for q in 1..=rho {
        for x in set.iter().copied().combinations(q) {
            for y in outside.iter().copied().combinations(q) {
                let mv = evaluator::evaluate_swap(instance, solution, index, &x, &y)?;
                evaluated += 1;
                min_delta = Some(min_delta.map_or(mv.delta, |d| d.min(mv.delta)));
                if meets_threshold(mv.delta, solution.total, eps_num, eps_den) {
                    return Ok((Some(mv), min_delta, evaluated));
                }
            }
        }
    }
    Ok((None, min_delta, evaluated))
}

/// One best-improvement step: the most improving candidate if it clears
/// the epsilon threshold. Ties go to the smallest (X, Y). Returns `None`
/// at (epsilon-approximate) local optima.
pub fn best_improvement_step(
    instance: &Instance,
    solution: &Solution,
    config: &SearchConfig,
) -> Result<Option<SwapMove>> {
    validate_config(config)?;
    let rho = clamp_rho(instance, config.rho);
    let index = evaluator::build_index(instance, &solution.destination_set())?;
    let (best, _) = scan_best(instance, solution, &index, rho, config.jobs)?;
    Ok(best.filter(|mv| meets_threshold(mv.delta, solution.total, config.eps_num, config.eps_den)))
}

/// Run the local search to termination (no acceptable move) or the
/// iteration cap.
pub fn run(instance: &Instance, config: &SearchConfig) -> Result<SearchOutcome> {
    validate_config(config)?;
    let rho_used = clamp_rho(instance, config.rho);
    let init = initial_destinations(instance, config)?;
    let mut solution = evaluate(instance, &init)?;
    let mut index = evaluator::build_index(instance, &solution.destination_set())?;
    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut iterations = 0u64;
    let mut certified = false;
    let mut hit_iteration_cap = false;

    loop {
        if iterations >= config.max_iters {
            hit_iteration_cap = true;
            break;
        }
        let t0 = Instant::now();
        let (accepted, min_delta, candidates) = if config.first_improvement {
            scan_first(instance, &solution, &index, rho_used, config.eps_num, config.eps_den)?
        } else {
            let (best, count) = scan_best(instance, &solution, &index, rho_used, config.jobs)?;
            let min_delta = best.as_ref().map(|mv| mv.delta);
            let accepted = best
                .filter(|mv| meets_threshold(mv.delta, solution.total, config.eps_num, config.eps_den));
            (accepted, min_delta, count)
        };
        match accepted {
            Some(mv) => {
                let total_before = solution.total;
                let (next, next_index) =
                    evaluator::apply_swap(instance, &index, &mv.swap_out, &mv.swap_in)?;
                debug_assert_eq!(
                    next.total as i128,
                    total_before as i128 + mv.delta,
                    "applied move must realize its evaluated delta"
                );
                iterations += 1;
                trace.push(IterationRecord {
                    iter: iterations,
                    delta: mv.delta,
                    total_before,
                    total_after: next.total,
                    swap_out: mv.swap_out,
                    swap_in: mv.swap_in,
                    candidates,
                    millis: t0.elapsed().as_millis(),
                });
                solution = next;
                index = next_index;
            }
            None => {
                // Terminated normally. The scan that found nothing is a
                // complete neighborhood scan; it certifies local optimality
                // exactly when no candidate improved at all.
                certified = !config.first_improvement && min_delta.is_none_or(|d| d >= 0);
                break;
            }
        }
    }

    Ok(SearchOutcome {
        solution,
        trace,
        certified,
        hit_iteration_cap,
        rho_used,
        iterations,
    })
}

/// Scan the full neighborhood of a solution and report the most negative
/// delta (certificate when none is negative).
pub fn certify_local_optimum(
    instance: &Instance,
    solution: &Solution,
    rho: usize,
    jobs: usize,
) -> Result<CertifyReport> {
    if rho == 0 {
        return Err(Error::InvalidArgument("swap size rho must be ≥ 1".into()));
    }
    if jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be ≥ 1".into()));
    }
    let rho_used = clamp_rho(instance, rho);
    let index = evaluator::build_index(instance, &solution.destination_set())?;
    let (best, candidates) = scan_best(instance, solution, &index, rho_used, jobs)?;
    let min_delta = best.as_ref().map(|mv| mv.delta);
    Ok(CertifyReport {
        rho_requested: rho,
        rho_used,
        candidates,
        min_delta,
        best,
        certified: min_delta.is_none_or(|d| d >= 0),
    })
}
