//! Path/cycle decomposition of the facility-transition digraph.
//!
//! Each facility slot `i` contributes one formal triple
//! `(s_i, facility i, o_i)`; the arcs inside a triple are fixed, and the
//! triple exits through `o_i` into the slot whose local destination is
//! `σ(o_i)`. On the triple level that is a functional graph
//! `succ(i) = slot(σ(o_i))`, which splits into cycles plus trees hanging
//! off them. Cycles are extracted first; the remaining triples are peeled
//! into paths starting from capture-free slots in ascending order, each
//! path following `succ` until it hits an already-removed triple. These
//! tie-breaks fix a deterministic decomposition; every property checked
//! downstream is independent of them.

use crate::analysis::paired::PairedSolutions;

/// One decomposition element, as triple slots in walk order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    /// Open walk; the last triple's exit leads outside the segment.
    Path(Vec<usize>),
    /// Closed walk; the last triple's exit is the first triple.
    Cycle(Vec<usize>),
}

impl Segment {
    /// The slots of this segment in walk order.
    pub fn slots(&self) -> &[usize] {
        match self {
            Segment::Path(v) | Segment::Cycle(v) => v,
        }
    }

    /// `true` for cycles.
    pub fn is_cycle(&self) -> bool {
        matches!(self, Segment::Cycle(_))
    }
}

/// The full decomposition with capture and center data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Triple-level successor: `succ[i]` is the slot of `σ(o_i)`.
    pub succ: Vec<usize>,
    /// Cycles first (in discovery order, each rotated to start at its
    /// lowest slot), then paths in peel order.
    pub segments: Vec<Segment>,
    /// Segment index of each triple.
    pub segment_of: Vec<usize>,
    /// Per slot `i`: the o-slots `j` with `σ(o_j) = s_i`, ascending.
    pub capt: Vec<Vec<usize>>,
    /// Per slot `i`: the o-slot preceding `s_i` inside its segment
    /// (`None` exactly for path starts).
    pub cent: Vec<Option<usize>>,
}

impl Decomposition {
    /// Number of facility triples.
    pub fn k(&self) -> usize {
        self.succ.len()
    }

    /// Segment indices that are paths whose last triple's `o` is captured
    /// by `s_slot` — the paths that feed this facility's captures.
    pub fn pc_paths(&self, s_slot: usize) -> Vec<usize> {
        self.capt[s_slot]
            .iter()
            .filter_map(|&j| {
                let seg = &self.segments[self.segment_of[j]];
                match seg {
                    Segment::Path(v) if *v.last().expect("paths are non-empty") == j => {
                        Some(self.segment_of[j])
                    }
                    _ => None,
                }
            })
            .collect()
    }

    /// Start slots of the paths feeding `s_slot`'s captures.
    pub fn t_slots(&self, s_slot: usize) -> Vec<usize> {
        self.pc_paths(s_slot)
            .into_iter()
            .map(|seg| self.segments[seg].slots()[0])
            .collect()
    }

    /// The captured o-slots of `s_slot` other than its center.
    pub fn h_slots(&self, s_slot: usize) -> Vec<usize> {
        self.capt[s_slot]
            .iter()
            .copied()
            .filter(|&j| Some(j) != self.cent[s_slot])
            .collect()
    }
}

/// Decompose a solution pair.
pub fn decompose(paired: &PairedSolutions) -> Decomposition {
    let k = paired.k();
    let succ: Vec<usize> = (0..k)
        .map(|i| {
            let nearest = paired.sigma_loc[paired.o_loc(i)];
            paired.s_slot_of_loc[nearest].expect("σ maps into the local destination set")
        })
        .collect();

    let mut capt = vec![Vec::new(); k];
    for (j, &target) in succ.iter().enumerate() {
        capt[target].push(j);
    }

    // Cycle extraction: walk from every slot in ascending order; a walk
    // that meets its own trail closes a cycle.
    const UNSEEN: u8 = 0;
    const ON_TRAIL: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![UNSEEN; k];
    let mut on_cycle = vec![false; k];
    let mut segments: Vec<Segment> = Vec::new();
    for start in 0..k {
        if state[start] != UNSEEN {
            continue;
        }
        let mut trail = Vec::new();
        let mut v = start;
        while state[v] == UNSEEN {
            state[v] = ON_TRAIL;
            trail.push(v);
            v = succ[v];
        }
        if state[v] == ON_TRAIL {
            let at = trail.iter().position(|&u| u == v).expect("v is on the trail");
            let mut cycle: Vec<usize> = trail[at..].to_vec();
            // Rotate to the lowest slot for a canonical presentation.
            let min_at = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, &u)| u)
                .map(|(pos, _)| pos)
                .expect("cycles are non-empty");
            cycle.rotate_left(min_at);
            for &u in &cycle {
                on_cycle[u] = true;
            }
            segments.push(Segment::Cycle(cycle));
        }
        for &u in &trail {
            state[u] = DONE;
        }
    }

    // Path peeling: starts are exactly the capture-free slots (provably so
    // under any peel order); in ascending order each start walks `succ`
    // until it reaches a triple already claimed by a cycle or an earlier
    // path.
    let mut used = on_cycle.clone();
    for start in 0..k {
        if !capt[start].is_empty() || used[start] {
            continue;
        }
        let mut path = Vec::new();
        let mut v = start;
        while !used[v] {
            used[v] = true;
            path.push(v);
            v = succ[v];
        }
        segments.push(Segment::Path(path));
    }
    debug_assert!(used.iter().all(|&u| u), "peeling must cover every triple");

    let mut segment_of = vec![usize::MAX; k];
    let mut cent = vec![None; k];
    for (si, seg) in segments.iter().enumerate() {
        let slots = seg.slots();
        for &u in slots {
            segment_of[u] = si;
        }
        match seg {
            Segment::Cycle(v) => {
                let r = v.len();
                for q in 0..r {
                    cent[v[(q + 1) % r]] = Some(v[q]);
                }
            }
            Segment::Path(v) => {
                for w in v.windows(2) {
                    cent[w[1]] = Some(w[0]);
                }
            }
        }
    }

    Decomposition { succ, segments, segment_of, capt, cent }
}
