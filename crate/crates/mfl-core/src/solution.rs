//! Solutions: destination vectors, canonicalization, and exact evaluation.
//!
//! A solution stores one destination per facility. The destination
//! *vector* determines the movement cost (it is **not** re-matched here;
//! the search and the exact oracle hand in min-cost-matched vectors), and
//! the induced destination *set* determines each client's assignment.
//!
//! Destination vectors are canonicalized so that the destination set
//! always has exactly `k` distinct locations: scanning facilities in index
//! order, a destination already taken by an earlier facility is replaced
//! by the facility's own initial location when still free, otherwise by
//! the lowest-index unused location. This never increases the assignment
//! cost of any client beyond what re-adding a location can fix (a larger
//! set only helps), and moving to one's own initial location is free.

use serde::{Deserialize, Serialize};

use crate::cost::{self, Cost, INF};
use crate::error::{Error, Result};
use crate::instance::Instance;

/// An evaluated solution. All fields are consistent with each other and
/// with the owning instance by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    /// Canonicalized destination vector: `destinations[i]` is facility
    /// `i`'s final location; all entries distinct.
    pub destinations: Vec<usize>,
    /// Total weighted movement cost of this vector.
    pub matching_cost: Cost,
    /// Total demand-weighted assignment cost.
    pub assignment_cost: Cost,
    /// `matching_cost + assignment_cost`, saturating at `INF`.
    pub total: Cost,
    /// Per client: the nearest destination location (lowest index on ties).
    pub sigma: Vec<usize>,
}

impl Solution {
    /// The destination set in ascending location order.
    pub fn destination_set(&self) -> Vec<usize> {
        let mut set = self.destinations.clone();
        set.sort_unstable();
        set
    }

    /// Parse a solution JSON file and cross-check it against the instance:
    /// destinations must already be canonical, and the stated costs and
    /// assignment map must match an exact re-evaluation.
    pub fn from_json_str(instance: &Instance, s: &str) -> Result<Solution> {
        let file: SolutionFile = serde_json::from_str(s)?;
        let canonical = canonicalize_destinations(instance, &file.destinations)?;
        if canonical != file.destinations {
            return Err(Error::InvalidSolution(format!(
                "destinations {:?} are not canonical (duplicates resolve to {:?})",
                file.destinations, canonical
            )));
        }
        let evaluated = evaluate(instance, &file.destinations)?;
        let stated_matching = file.matching_cost.to_cost("matching_cost")?;
        let stated_assignment = file.assignment_cost.to_cost("assignment_cost")?;
        let stated_total = file.total.to_cost("total")?;
        if stated_matching != evaluated.matching_cost {
            return Err(Error::InvalidSolution(format!(
                "stated matching_cost {} but evaluation gives {}",
                cost::fmt_cost(stated_matching),
                cost::fmt_cost(evaluated.matching_cost)
            )));
        }
        if stated_assignment != evaluated.assignment_cost {
            return Err(Error::InvalidSolution(format!(
                "stated assignment_cost {} but evaluation gives {}",
                cost::fmt_cost(stated_assignment),
                cost::fmt_cost(evaluated.assignment_cost)
            )));
        }
        if stated_total != evaluated.total {
            return Err(Error::InvalidSolution(format!(
                "stated total {} but evaluation gives {}",
                cost::fmt_cost(stated_total),
                cost::fmt_cost(evaluated.total)
            )));
        }
        if file.sigma != evaluated.sigma {
            return Err(Error::InvalidSolution(format!(
                "stated sigma {:?} does not follow the nearest-destination rule \
                 with lowest-index ties (expected {:?})",
                file.sigma, evaluated.sigma
            )));
        }
        Ok(evaluated)
    }

    /// Serialize as solution JSON (trailing newline, deterministic bytes).
    pub fn to_json_string(&self) -> String {
        let file = SolutionFile {
            destinations: self.destinations.clone(),
            matching_cost: JsonCost::of(self.matching_cost),
            assignment_cost: JsonCost::of(self.assignment_cost),
            total: JsonCost::of(self.total),
            sigma: self.sigma.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("solution serialization");
        s.push('\n');
        s
    }
}

/// Cost field in solution JSON: plain integer or the `"INF"` token.
#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonCost {
    Int(u64),
    Text(String),
}

impl JsonCost {
    fn of(c: Cost) -> JsonCost {
        if cost::is_inf(c) {
            JsonCost::Text("INF".to_string())
        } else {
            JsonCost::Int(c)
        }
    }

    fn to_cost(&self, field: &str) -> Result<Cost> {
        match self {
            JsonCost::Int(v) => Ok(*v),
            JsonCost::Text(s) if s == "INF" => Ok(INF),
            JsonCost::Text(s) => Err(Error::InvalidSolution(format!(
                "{field}: unrecognized cost token {s:?} (only \"INF\" is allowed)"
            ))),
        }
    }
}

/// On-disk shape of a solution.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolutionFile {
    destinations: Vec<usize>,
    matching_cost: JsonCost,
    assignment_cost: JsonCost,
    total: JsonCost,
    sigma: Vec<usize>,
}

/// Resolve duplicate destinations (see module docs). The result has `k`
/// distinct locations; entries without conflicts are kept verbatim.
pub fn canonicalize_destinations(instance: &Instance, destinations: &[usize]) -> Result<Vec<usize>> {
    let n = instance.n();
    let k = instance.k();
    if destinations.len() != k {
        return Err(Error::InvalidArgument(format!(
            "destination vector has length {} but the instance has {k} facilities",
            destinations.len()
        )));
    }
    for (i, &d) in destinations.iter().enumerate() {
        if d >= n {
            return Err(Error::InvalidArgument(format!(
                "facility {i} destination {d} is outside 0..{n}"
            )));
        }
    }
    // First occurrences keep their slots; only true duplicates are
    // replaced, so a unique destination can never be displaced by an
    // earlier duplicate's fallback.
    let mut taken = vec![false; n];
    let mut keeps = vec![false; k];
    for (i, &d) in destinations.iter().enumerate() {
        if !taken[d] {
            taken[d] = true;
            keeps[i] = true;
        }
    }
    let mut out = destinations.to_vec();
    for i in 0..k {
        if keeps[i] {
            continue;
        }
        let home = instance.facilities()[i].loc;
        let resolved = if !taken[home] {
            home
        } else {
            (0..n)
                .find(|&v| !taken[v])
                .expect("k ≤ n guarantees an unused location")
        };
        taken[resolved] = true;
        out[i] = resolved;
    }
    Ok(out)
}

/// Nearest destination to `loc` under the assignment metric, ties to the
/// lowest location index. `set` must be ascending.
pub(crate) fn nearest_in_set(instance: &Instance, set: &[usize], loc: usize) -> (usize, Cost) {
    let mut best_loc = set[0];
    let mut best_d = instance.assign_dist(loc, set[0]);
    for &s in &set[1..] {
        let d = instance.assign_dist(loc, s);
        if d < best_d {
            best_d = d;
            best_loc = s;
        }
    }
    (best_loc, best_d)
}

/// Evaluate a destination vector exactly: canonicalize, take the movement
/// cost of the (canonicalized) vector as given — no re-matching — and
/// assign every client to its nearest destination. `INF` saturates.
pub fn evaluate(instance: &Instance, destinations: &[usize]) -> Result<Solution> {
    let destinations = canonicalize_destinations(instance, destinations)?;
    let matching_cost = cost::sum(
        destinations
            .iter()
            .enumerate()
            .map(|(i, &d)| instance.weighted_move_cost(i, d)),
    );
    let mut set = destinations.clone();
    set.sort_unstable();
    let mut sigma = Vec::with_capacity(instance.clients().len());
    let mut assignment_cost: Cost = 0;
    for client in instance.clients() {
        let (s, d) = nearest_in_set(instance, &set, client.loc);
        sigma.push(s);
        assignment_cost = cost::add(assignment_cost, cost::mul(client.demand, d));
    }
    let total = cost::add(matching_cost, assignment_cost);
    Ok(Solution {
        destinations,
        matching_cost,
        assignment_cost,
        total,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Client, Facility};
    use crate::metric::Metric;
    use proptest::prelude::*;

    /// Line metric on `n` locations with unit spacing.
    fn line(n: usize) -> Metric {
        let edges: Vec<(usize, usize, Cost)> = (0..n - 1).map(|i| (i, i + 1, 1)).collect();
        Metric::closure_from_edges(n, &edges).unwrap()
    }

    fn line_instance(n: usize, facilities: Vec<Facility>, clients: Vec<Client>) -> Instance {
        Instance::single_metric(line(n), facilities, clients).unwrap()
    }

    #[test]
    fn co_located_everything_costs_zero() {
        let inst = line_instance(
            3,
            vec![Facility { loc: 0, weight: 1 }],
            vec![Client { loc: 0, demand: 5 }],
        );
        let sol = evaluate(&inst, &[0]).unwrap();
        assert_eq!(sol.matching_cost, 0);
        assert_eq!(sol.assignment_cost, 0);
        assert_eq!(sol.total, 0);
        assert_eq!(sol.sigma, vec![0]);
    }

    #[test]
    fn movement_is_not_rematched() {
        // Facilities at 0 and 3; crossed destinations are kept as given.
        let inst = line_instance(
            4,
            vec![Facility { loc: 0, weight: 1 }, Facility { loc: 3, weight: 1 }],
            vec![],
        );
        let crossed = evaluate(&inst, &[3, 0]).unwrap();
        assert_eq!(crossed.matching_cost, 6);
        let straight = evaluate(&inst, &[0, 3]).unwrap();
        assert_eq!(straight.matching_cost, 0);
    }

    #[test]
    fn duplicate_destination_falls_back_to_initial_location() {
        let inst = line_instance(
            8,
            vec![Facility { loc: 3, weight: 1 }, Facility { loc: 7, weight: 1 }],
            vec![],
        );
        let sol = evaluate(&inst, &[3, 3]).unwrap();
        assert_eq!(sol.destinations, vec![3, 7]);
        assert_eq!(sol.matching_cost, 0);
    }

    #[test]
    fn duplicate_with_taken_initial_falls_back_to_lowest_unused() {
        // Both facilities start at the same place; facility 1's duplicate
        // destination can't use its initial location (taken by facility 0's
        // entry), so it takes the lowest-index unused location 0.
        let inst = line_instance(
            4,
            vec![Facility { loc: 2, weight: 1 }, Facility { loc: 2, weight: 1 }],
            vec![],
        );
        let sol = evaluate(&inst, &[2, 2]).unwrap();
        assert_eq!(sol.destinations, vec![2, 0]);
        assert_eq!(sol.matching_cost, 2);
    }

    #[test]
    fn canonicalization_keeps_distinct_vectors_verbatim() {
        let inst = line_instance(
            5,
            vec![Facility { loc: 0, weight: 1 }, Facility { loc: 4, weight: 1 }],
            vec![],
        );
        assert_eq!(canonicalize_destinations(&inst, &[4, 1]).unwrap(), vec![4, 1]);
    }

    #[test]
    fn sigma_breaks_ties_toward_the_lowest_index() {
        // Client at 2 is equidistant from destinations 1 and 3.
        let inst = line_instance(
            5,
            vec![Facility { loc: 1, weight: 1 }, Facility { loc: 3, weight: 1 }],
            vec![Client { loc: 2, demand: 1 }],
        );
        let sol = evaluate(&inst, &[3, 1]).unwrap();
        assert_eq!(sol.sigma, vec![1]);
        assert_eq!(sol.assignment_cost, 1);
    }

    #[test]
    fn inf_propagates_and_zero_demand_annihilates() {
        let metric = Metric::closure_from_edges(3, &[(0, 1, 4)]).unwrap(); // 2 unreachable
        let inst = Instance::single_metric(
            metric,
            vec![Facility { loc: 0, weight: 1 }],
            vec![Client { loc: 2, demand: 3 }, Client { loc: 2, demand: 0 }],
        )
        .unwrap();
        let sol = evaluate(&inst, &[1]).unwrap();
        assert_eq!(sol.matching_cost, 4);
        assert_eq!(sol.assignment_cost, INF);
        assert_eq!(sol.total, INF);

        // With only the zero-demand client, INF never enters the total.
        let inst2 = Instance::single_metric(
            line(3),
            vec![Facility { loc: 0, weight: 1 }],
            vec![Client { loc: 2, demand: 0 }],
        )
        .unwrap();
        let sol2 = evaluate(&inst2, &[0]).unwrap();
        assert_eq!(sol2.total, 0);
    }

    #[test]
    fn length_and_range_violations_are_rejected() {
        let inst = line_instance(3, vec![Facility { loc: 0, weight: 1 }], vec![]);
        assert!(evaluate(&inst, &[0, 1]).is_err());
        assert!(evaluate(&inst, &[9]).is_err());
    }

    #[test]
    fn json_round_trip_and_cross_checks() {
        let inst = line_instance(
            5,
            vec![Facility { loc: 0, weight: 2 }, Facility { loc: 4, weight: 1 }],
            vec![Client { loc: 1, demand: 3 }, Client { loc: 3, demand: 1 }],
        );
        let sol = evaluate(&inst, &[1, 4]).unwrap();
        let json = sol.to_json_string();
        let parsed = Solution::from_json_str(&inst, &json).unwrap();
        assert_eq!(parsed, sol);
        assert_eq!(parsed.to_json_string(), json);

        // A tampered total is caught.
        let bad = json.replace(
            &format!("\"total\": {}", sol.total),
            &format!("\"total\": {}", sol.total + 1),
        );
        assert_ne!(bad, json, "replacement must hit");
        let err = Solution::from_json_str(&inst, &bad).unwrap_err();
        assert!(err.to_string().contains("stated total"), "{err}");

        // Non-canonical destinations are caught.
        let dup = json.replace(
            &"\"destinations\": [\n    1,\n    4\n  ]".to_string(),
            "\"destinations\": [\n    1,\n    1\n  ]",
        );
        if dup != json {
            assert!(Solution::from_json_str(&inst, &dup).is_err());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        /// Adding a destination never increases any client's assignment
        /// distance (monotonicity of min over a grown set).
        #[test]
        fn assignment_cost_is_monotone_in_the_destination_set(
            edges in prop::collection::vec((0usize..6, 0usize..6, 1u64..50), 4..14),
            subset_mask in 1u8..63,
            extra in 0usize..6,
            client_loc in 0usize..6,
        ) {
            let edges: Vec<(usize, usize, Cost)> =
                edges.into_iter().filter(|(u, v, _)| u != v).collect();
            prop_assume!(!edges.is_empty());
            let metric = Metric::closure_from_edges(6, &edges).unwrap();
            let set: Vec<usize> = (0..6).filter(|v| subset_mask & (1 << v) != 0).collect();
            prop_assume!(!set.is_empty());
            let inst = Instance::single_metric(
                metric,
                vec![Facility { loc: 0, weight: 1 }],
                vec![Client { loc: client_loc, demand: 1 }],
            ).unwrap();
            let before = nearest_in_set(&inst, &set, client_loc).1;
            let mut grown = set.clone();
            if !grown.contains(&extra) {
                grown.push(extra);
                grown.sort_unstable();
            }
            let after = nearest_in_set(&inst, &grown, client_loc).1;
            prop_assert!(after <= before);
        }

        /// Canonicalization is the identity on already-distinct vectors and
        /// always yields k distinct in-range locations.
        #[test]
        fn canonicalization_outputs_k_distinct_locations(
            dests in prop::collection::vec(0usize..7, 3),
        ) {
            let inst = line_instance(
                7,
                vec![
                    Facility { loc: 1, weight: 1 },
                    Facility { loc: 3, weight: 1 },
                    Facility { loc: 5, weight: 1 },
                ],
                vec![],
            );
            let out = canonicalize_destinations(&inst, &dests).unwrap();
            let mut sorted = out.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), 3, "distinct: {:?}", out);
            prop_assert!(out.iter().all(|&d| d < 7));
            let mut seen = std::collections::HashSet::new();
            for (i, &d) in dests.iter().enumerate() {
                if seen.insert(d) {
                    prop_assert_eq!(out[i], d, "first occurrences kept");
                }
            }
        }
    }
}
