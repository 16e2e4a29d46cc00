//! Instance factories: seeded random instances, the k-median reduction,
//! and the locality-gap trap family.
//!
//! Every generator is a pure function of its parameters — the same seed
//! always produces a byte-identical instance — and every produced metric
//! passes validation (random constructions are repaired by metric closure
//! where rounding could break the triangle inequality).

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{Cost, INF};
use crate::error::{Error, Result};
use crate::instance::{Client, Facility, Instance};
use crate::metric::Metric;

/// Distance model for random instances.
#[derive(Debug, Clone, PartialEq)]
pub enum RandomModel {
    /// Distinct integer grid points in [0, coord_range]², distances are
    /// Euclidean rounded to the nearest integer (then metric-closed to
    /// repair rounding).
    Euclidean {
        /// Maximum coordinate on each axis (inclusive).
        coord_range: u64,
    },
    /// Random undirected edges followed by shortest-path closure.
    /// Disconnected pairs stay at infinity.
    Graph {
        /// Probability of each potential edge, in [0, 1].
        edge_density: f64,
        /// Edge costs are uniform in 1..=max_edge_cost.
        max_edge_cost: u64,
    },
}

/// Parameters for [`gen_random`].
#[derive(Debug, Clone, PartialEq)]
pub struct RandomConfig {
    /// Number of locations.
    pub n: usize,
    /// Number of facilities.
    pub k: usize,
    /// Number of clients (sampled without replacement, so ≤ n).
    pub num_clients: usize,
    /// Distance model.
    pub model: RandomModel,
    /// Inclusive facility-weight range.
    pub weight_range: (u64, u64),
    /// Inclusive client-demand range.
    pub demand_range: (u64, u64),
    /// RNG seed; equal seeds give byte-identical instances.
    pub seed: u64,
}

/// The largest coordinate the Euclidean model accepts; keeps squared
/// distances well inside the exactly-representable f64 integers.
pub const MAX_COORD_RANGE: u64 = 1_000_000;

fn sample_distinct(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<usize> {
    let mut locs: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = i + rng.gen_range(0..n - i);
        locs.swap(i, j);
    }
    locs.truncate(count);
    locs
}

/// Generate a random single-metric instance.
pub fn gen_random(config: &RandomConfig) -> Result<Instance> {
    let RandomConfig { n, k, num_clients, .. } = *config;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be ≥ 1".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must satisfy 1 ≤ k ≤ n = {n}")));
    }
    if num_clients > n {
        return Err(Error::InvalidArgument(format!(
            "{num_clients} clients cannot be sampled without replacement from {n} locations"
        )));
    }
    let (w_lo, w_hi) = config.weight_range;
    if w_lo > w_hi {
        return Err(Error::InvalidArgument(format!("empty weight range {w_lo}..={w_hi}")));
    }
    let (d_lo, d_hi) = config.demand_range;
    if d_lo > d_hi {
        return Err(Error::InvalidArgument(format!("empty demand range {d_lo}..={d_hi}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let metric = match &config.model {
        RandomModel::Euclidean { coord_range } => {
            let side = coord_range + 1;
            if *coord_range > MAX_COORD_RANGE {
                return Err(Error::InvalidArgument(format!(
                    "coord_range {coord_range} exceeds the supported maximum {MAX_COORD_RANGE}"
                )));
            }
            if (side as u128) * (side as u128) < n as u128 {
                return Err(Error::InvalidArgument(format!(
                    "a {side}×{side} grid has fewer than {n} distinct points"
                )));
            }
            let mut seen = HashSet::with_capacity(n);
            let mut points: Vec<(u64, u64)> = Vec::with_capacity(n);
            while points.len() < n {
                let p = (rng.gen_range(0..side), rng.gen_range(0..side));
                if seen.insert(p) {
                    points.push(p);
                }
            }
            let rows: Vec<Vec<Cost>> = (0..n)
                .map(|u| {
                    (0..n)
                        .map(|v| {
                            let dx = points[u].0.abs_diff(points[v].0);
                            let dy = points[u].1.abs_diff(points[v].1);
                            ((dx * dx + dy * dy) as f64).sqrt().round() as Cost
                        })
                        .collect()
                })
                .collect();
            // Rounding can break the triangle inequality; closure repairs it.
            Metric::closed_from_matrix(rows)?
        }
        RandomModel::Graph { edge_density, max_edge_cost } => {
            if !(0.0..=1.0).contains(edge_density) {
                return Err(Error::InvalidArgument(format!(
                    "edge density {edge_density} must lie in [0, 1]"
                )));
            }
            if *max_edge_cost == 0 {
                return Err(Error::InvalidArgument("max edge cost must be ≥ 1".into()));
            }
            let mut edges: Vec<(usize, usize, Cost)> = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(*edge_density) {
                        edges.push((u, v, rng.gen_range(1..=*max_edge_cost)));
                    }
                }
            }
            Metric::closure_from_edges(n, &edges)?
        }
    };

    let facility_locs = sample_distinct(&mut rng, n, k);
    let facilities = facility_locs
        .into_iter()
        .map(|loc| Facility { loc, weight: rng.gen_range(w_lo..=w_hi) })
        .collect();
    let client_locs = sample_distinct(&mut rng, n, num_clients);
    let clients = client_locs
        .into_iter()
        .map(|loc| Client { loc, demand: rng.gen_range(d_lo..=d_hi) })
        .collect();
    Instance::single_metric(metric, facilities, clients)
}

/// Embed a k-median instance (a metric, clients, and a target count k)
/// as a mobile-facility instance: unit-weight facilities start at the
/// lexicographically first k locations and every demand is multiplied by
/// `demand_multiplier`, so assignment dominates and optimal destination
/// sets track k-median optima to within the total movement cost.
pub fn gen_kmedian_reduction(
    metric: Metric,
    clients: &[Client],
    k: usize,
    demand_multiplier: u64,
) -> Result<Instance> {
    if demand_multiplier == 0 {
        return Err(Error::InvalidArgument("demand multiplier must be ≥ 1".into()));
    }
    let n = metric.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} must satisfy 1 ≤ k ≤ n = {n}")));
    }
    let facilities = (0..k).map(|loc| Facility { loc, weight: 1 }).collect();
    let scaled: Result<Vec<Client>> = clients
        .iter()
        .map(|c| {
            let demand = c.demand.checked_mul(demand_multiplier).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "demand {} × multiplier {demand_multiplier} overflows",
                    c.demand
                ))
            })?;
            Ok(Client { loc: c.loc, demand })
        })
        .collect();
    Instance::single_metric(metric, facilities, scaled?)
}

/// Build the locality-gap trap on 2(p+1) locations.
///
/// Locations 0..=p are the facility homes i₀..i_p; locations p+1..=2p+1
/// are the client points j₀..j_p. Assignment distances: c(j_q, i_q) = 1
/// and every other distinct pair costs `m_cost`. Movement distances:
/// c(i_q, j_{(q+1) mod (p+1)}) = `d_cost` and every other distinct pair
/// costs `m_cost`. The all-i set is optimal with total p+1; the all-j set
/// has total (p+1)·d_cost — ratio exactly `d_cost` — yet admits no
/// improving swap of size ≤ p.
pub fn gen_locality_gap(p: usize, d_cost: Cost, m_cost: Cost) -> Result<Instance> {
    if p == 0 {
        return Err(Error::InvalidArgument("p must be ≥ 1".into()));
    }
    if d_cost < 2 {
        return Err(Error::InvalidArgument("d_cost must be ≥ 2".into()));
    }
    if m_cost == INF {
        return Err(Error::InvalidArgument(
            "m_cost must be finite (it stands in for unreachable)".into(),
        ));
    }
    let margin = (p as u128 + 1) * d_cost as u128 * 1_000;
    if (m_cost as u128) <= margin {
        return Err(Error::InvalidArgument(format!(
            "m_cost {m_cost} must exceed (p+1)·d_cost·1000 = {margin} to preserve the trap"
        )));
    }
    let groups = p + 1;
    let n = 2 * groups;
    let i_loc = |q: usize| q;
    let j_loc = |q: usize| groups + q;

    let mut assign = vec![vec![m_cost; n]; n];
    let mut movement = vec![vec![m_cost; n]; n];
    for v in 0..n {
        assign[v][v] = 0;
        movement[v][v] = 0;
    }
    for q in 0..groups {
        assign[j_loc(q)][i_loc(q)] = 1;
        assign[i_loc(q)][j_loc(q)] = 1;
        let target = j_loc((q + 1) % groups);
        movement[i_loc(q)][target] = d_cost;
        movement[target][i_loc(q)] = d_cost;
    }
    // The cheap edges form perfect matchings, so no two-hop detour beats a
    // direct entry and closure is the identity; it runs anyway as a guard.
    let assign = Metric::closed_from_matrix(assign)?;
    let movement = Metric::closed_from_matrix(movement)?;

    let facilities = (0..groups).map(|q| Facility { loc: i_loc(q), weight: 1 }).collect();
    let clients = (0..groups).map(|q| Client { loc: j_loc(q), demand: 1 }).collect();
    Instance::new(assign, Some(movement), facilities, clients)
}
