//! The capture digraph over facility slots.
//!
//! Node `i` stands for facility `i`'s triple; there is exactly one arc
//! out of each node, from `i` to the slot whose local destination
//! captures `o_i`. An arc `(i, i')` is a *center edge* when `o_i` is the
//! designated center of `s_{i'}` under the capture-based classification.
//! Because each node has out-degree exactly one, every weakly connected
//! component is a directed tree oriented toward a root cycle; the center
//! edges form node-disjoint paths and cycles inside it.

use crate::analysis::classes::{ClassPartition, ClassVariant};
use crate::analysis::paired::PairedSolutions;
use crate::error::{Error, Result};

/// The capture digraph with its center-edge subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGraph {
    /// The single out-arc of each slot: `succ[i]` owns the destination
    /// that captures `o_i`. Out-degree 1 holds by representation.
    pub succ: Vec<usize>,
    /// Whether the arc out of slot `i` is a center edge.
    pub center_edge: Vec<bool>,
}

impl HGraph {
    /// Number of slots.
    pub fn k(&self) -> usize {
        self.succ.len()
    }

    /// Slots with more than one incoming center edge. Centers are unique
    /// per owner, so any violation indicates internal inconsistency.
    pub fn center_in_degree_violations(&self) -> u64 {
        let mut indeg = vec![0u64; self.k()];
        for (i, &is_center) in self.center_edge.iter().enumerate() {
            if is_center {
                indeg[self.succ[i]] += 1;
            }
        }
        indeg.iter().filter(|&&d| d > 1).count() as u64
    }

    /// Nodes on some directed cycle of the full graph.
    pub fn cycle_nodes(&self) -> Vec<bool> {
        let k = self.k();
        let mut on_cycle = vec![false; k];
        let mut state = vec![0u8; k]; // 0 unseen, 1 on trail, 2 done
        for start in 0..k {
            if state[start] != 0 {
                continue;
            }
            let mut trail = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                trail.push(v);
                v = self.succ[v];
            }
            if state[v] == 1 {
                let at = trail.iter().position(|&u| u == v).expect("on trail");
                for &u in &trail[at..] {
                    on_cycle[u] = true;
                }
            }
            for &u in &trail {
                state[u] = 2;
            }
        }
        on_cycle
    }

    /// Nodes that cannot reach a cycle by following arcs. In a functional
    /// graph this must be zero; computed by walking, not assumed.
    pub fn cycle_reach_violations(&self) -> u64 {
        let on_cycle = self.cycle_nodes();
        let k = self.k();
        (0..k)
            .filter(|&start| {
                let mut v = start;
                for _ in 0..=k {
                    if on_cycle[v] {
                        return false;
                    }
                    v = self.succ[v];
                }
                true
            })
            .count() as u64
    }

    /// Center-edge components, each reported as `(nodes, is_cycle)` with
    /// nodes in walk order. Since center in/out degrees are at most one,
    /// the components partition the slots into simple paths and cycles —
    /// a slot with no center arcs at all is a single-node path; the
    /// walker re-derives the shapes rather than trusting them.
    pub fn center_components(&self) -> Vec<(Vec<usize>, bool)> {
        let k = self.k();
        let mut center_pred = vec![None; k];
        for i in 0..k {
            if self.center_edge[i] {
                center_pred[self.succ[i]] = Some(i);
            }
        }
        let mut claimed = vec![false; k];
        let mut components = Vec::new();
        // Path components start where no center edge comes in.
        for start in 0..k {
            if claimed[start] || center_pred[start].is_some() {
                continue;
            }
            let mut nodes = vec![start];
            claimed[start] = true;
            let mut v = start;
            while self.center_edge[v] && !claimed[self.succ[v]] {
                v = self.succ[v];
                claimed[v] = true;
                nodes.push(v);
            }
            components.push((nodes, false));
        }
        // Whatever remains with center arcs lies on center cycles. The
        // walk is step-bounded so inconsistent inputs yield an open walk
        // instead of a hang.
        for start in 0..k {
            if claimed[start] || !self.center_edge[start] {
                continue;
            }
            let mut nodes = vec![start];
            claimed[start] = true;
            let mut v = self.succ[start];
            let mut closed = false;
            for _ in 0..k {
                if v == start {
                    closed = true;
                    break;
                }
                if claimed[v] || !self.center_edge[v] {
                    break;
                }
                nodes.push(v);
                claimed[v] = true;
                v = self.succ[v];
            }
            components.push((nodes, closed));
        }
        components
    }
}

/// Build the capture digraph for a capture-based partition.
pub fn build_hgraph(paired: &PairedSolutions, partition: &ClassPartition) -> Result<HGraph> {
    if partition.variant != ClassVariant::CaptureBased {
        return Err(Error::InvalidArgument(
            "the capture digraph is defined for the capture-based classification".into(),
        ));
    }
    let k = paired.k();
    let succ: Vec<usize> = (0..k)
        .map(|i| {
            let nearest = paired.sigma_loc[paired.o_loc(i)];
            paired.s_slot_of_loc[nearest].expect("σ maps into the local destination set")
        })
        .collect();
    let center_edge: Vec<bool> =
        (0..k).map(|i| partition.cent[succ[i]] == Some(i)).collect();
    Ok(HGraph { succ, center_edge })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::classes::classify;
    use crate::analysis::decompose::decompose;
    use crate::analysis::paired::pair;
    use crate::exact;
    use crate::generators::{gen_random, RandomConfig, RandomModel};
    use crate::instance::{Facility, Instance};
    use crate::matching;
    use crate::metric::Metric;
    use crate::search::{self, SearchConfig};
    use crate::solution::evaluate;

    #[test]
    fn a_stationary_single_facility_is_a_center_self_loop() {
        let metric = Metric::closure_from_edges(2, &[(0, 1, 5)]).unwrap();
        let inst = Instance::single_metric(
            metric,
            vec![Facility { loc: 0, weight: 1 }],
            vec![],
        )
        .unwrap();
        let sol = evaluate(&inst, &[0]).unwrap();
        let paired = pair(&inst, &sol, &sol).unwrap();
        let dec = decompose(&paired);
        let part = classify(&paired, &dec, 2, ClassVariant::CaptureBased).unwrap();
        let h = build_hgraph(&paired, &part).unwrap();
        assert_eq!(h.succ, vec![0]);
        assert_eq!(h.center_edge, vec![true]);
        assert_eq!(h.center_components(), vec![(vec![0], true)]);
        assert_eq!(h.center_in_degree_violations(), 0);
        assert_eq!(h.cycle_reach_violations(), 0);
    }

    #[test]
    fn crossed_captures_form_one_center_two_cycle() {
        // Same wiring as the decomposition test: each reference
        // destination is captured by the other facility's destination.
        let metric = Metric::closure_from_edges(
            6,
            &[(1, 2, 1), (0, 3, 1), (0, 4, 1), (1, 5, 1), (2, 4, 1), (3, 5, 1)],
        )
        .unwrap();
        let inst = Instance::single_metric(
            metric,
            vec![Facility { loc: 4, weight: 1 }, Facility { loc: 5, weight: 1 }],
            vec![],
        )
        .unwrap();
        let (_, local_dests) = matching::movement_cost(&inst, &[0, 1]).unwrap();
        let local = evaluate(&inst, &local_dests).unwrap();
        let (_, ref_dests) = matching::movement_cost(&inst, &[2, 3]).unwrap();
        let reference = evaluate(&inst, &ref_dests).unwrap();
        let paired = pair(&inst, &local, &reference).unwrap();
        let dec = decompose(&paired);
        let part = classify(&paired, &dec, 2, ClassVariant::CaptureBased).unwrap();
        let h = build_hgraph(&paired, &part).unwrap();
        assert_eq!(h.succ, vec![1, 0]);
        assert_eq!(h.center_edge, vec![true, true]);
        let comps = h.center_components();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].1, "the component is a cycle");
        assert_eq!(comps[0].0.len(), 2);
    }

    #[test]
    fn path_decomposition_partitions_are_rejected() {
        let metric = Metric::closure_from_edges(2, &[(0, 1, 5)]).unwrap();
        let inst = Instance::single_metric(
            metric,
            vec![Facility { loc: 0, weight: 1 }],
            vec![],
        )
        .unwrap();
        let sol = evaluate(&inst, &[0]).unwrap();
        let paired = pair(&inst, &sol, &sol).unwrap();
        let dec = decompose(&paired);
        let part = classify(&paired, &dec, 2, ClassVariant::PathDecomposition).unwrap();
        assert!(matches!(
            build_hgraph(&paired, &part),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn random_graphs_satisfy_the_structural_invariants() {
        for seed in 0..15 {
            let config = RandomConfig {
                n: 12,
                k: 5,
                num_clients: 6,
                model: RandomModel::Graph { edge_density: 0.6, max_edge_cost: 20 },
                weight_range: (1, 3),
                demand_range: (1, 3),
                seed,
            };
            let inst = gen_random(&config).unwrap();
            let local = search::run(&inst, &SearchConfig::default()).unwrap().solution;
            let reference = exact::brute_force_opt(&inst, 1_000_000, 1).unwrap().solution;
            let paired = pair(&inst, &local, &reference).unwrap();
            let dec = decompose(&paired);
            let part = classify(&paired, &dec, 2, ClassVariant::CaptureBased).unwrap();
            let h = build_hgraph(&paired, &part).unwrap();

            // The graph agrees with the decomposition's successor map.
            assert_eq!(h.succ, dec.succ, "seed {seed}");
            assert_eq!(h.center_in_degree_violations(), 0, "seed {seed}");
            assert_eq!(h.cycle_reach_violations(), 0, "seed {seed}");
            // Center arcs point at slots that designate them as center.
            for i in 0..paired.k() {
                if h.center_edge[i] {
                    assert_eq!(part.cent[h.succ[i]], Some(i), "seed {seed} slot {i}");
                }
            }
            // Component walk covers each center-arc node exactly once and
            // each component is a simple path or cycle in the arc set.
            let comps = h.center_components();
            let mut seen = vec![0u32; paired.k()];
            for (nodes, is_cycle) in &comps {
                for w in nodes.windows(2) {
                    assert!(h.center_edge[w[0]] && h.succ[w[0]] == w[1]);
                }
                let last = *nodes.last().unwrap();
                if *is_cycle {
                    assert!(h.center_edge[last] && h.succ[last] == nodes[0]);
                } else if nodes.len() > 1 {
                    // A path's last node either has no center out-arc or
                    // exits into a node of another component.
                    assert!(!h.center_edge[last] || !nodes.contains(&h.succ[last]));
                }
                for &u in nodes {
                    seen[u] += 1;
                }
            }
            for (i, &hits) in seen.iter().enumerate() {
                assert_eq!(
                    hits, 1,
                    "seed {seed}: node {i} must be in exactly one component \
                     (isolated slots are single-node paths)"
                );
            }
        }
    }
}
