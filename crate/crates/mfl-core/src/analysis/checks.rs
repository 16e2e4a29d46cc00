//! Exact inequality checks comparing a local solution against a reference.
//!
//! Every check reduces to integer comparisons: rational factors are
//! cross-multiplied away, all arithmetic runs in checked 128-bit
//! integers, and there is no floating point and no tolerance anywhere.
//! A quantity that cannot be computed exactly — an unreachable distance
//! or a product beyond 128 bits — yields a *failing* entry rather than a
//! guessed verdict.
//!
//! Notation in the entry formulas, with `i` a facility slot and `j` a
//! client: `f_i`/`f*_i` are weighted movement costs to the local and
//! reference destinations, `c_j`/`c*_j` the unweighted assignment
//! distances, `σ` maps a location to its nearest local destination, and
//! `d_j` is client demand (a demand-`d` client counts as `d` co-located
//! unit clients throughout).

use crate::analysis::classes::{ClassPartition, ClassVariant, FacilityClass};
use crate::analysis::decompose::Decomposition;
use crate::analysis::paired::PairedSolutions;
use crate::analysis::report::CheckEntry;
use crate::cost::{Cost, INF};
use crate::error::{Error, Result};
use crate::matching;
use crate::solution::evaluate;

/// A finite cost as an exact value; unreachable distances propagate as
/// `None` and surface as failing entries.
fn fin(c: Cost) -> Option<i128> {
    (c != INF).then_some(c as i128)
}

fn add(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    a?.checked_add(b?)
}

fn sub(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    a?.checked_sub(b?)
}

fn mul(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    a?.checked_mul(b?)
}

fn sum<I: IntoIterator<Item = Option<i128>>>(items: I) -> Option<i128> {
    items.into_iter().try_fold(0i128, |acc, v| acc.checked_add(v?))
}

fn entry(name: &str, subject: String, lhs: Option<i128>, rhs: Option<i128>) -> CheckEntry {
    match (lhs, rhs) {
        (Some(l), Some(r)) => CheckEntry::bound(name, subject, l, r),
        _ => CheckEntry::not_computable(name, subject),
    }
}

/// Distance from `o_i` to its nearest local destination.
fn exit_dist(paired: &PairedSolutions, i: usize) -> Option<i128> {
    let o = paired.o_loc(i);
    fin(paired.instance().assign_dist(o, paired.sigma_loc[o]))
}

/// Rerouting every client from its reference destination's neighborhood
/// costs at most two reference hops: for each client `j`,
/// `c(j, σ(σ*(j))) − c_j ≤ 2·c*_j`. Holds for any valid pair by the
/// triangle inequality, including two-metric instances.
pub fn check_reassignment(paired: &PairedSolutions) -> Vec<CheckEntry> {
    let inst = paired.instance();
    inst.clients()
        .iter()
        .enumerate()
        .map(|(j, client)| {
            let rehomed = paired.sigma_loc[paired.reference.sigma[j]];
            let lhs = sub(fin(inst.assign_dist(client.loc, rehomed)), fin(paired.c[j]));
            let rhs = mul(Some(2), fin(paired.c_star[j]));
            entry("reassignment", format!("client {j}"), lhs, rhs)
        })
        .collect()
}

/// Walks the subpath from `s_slot`'s triple to `o_slot`'s triple along
/// the decomposition (wrapping inside cycles) and checks the shift cost.
///
/// Shifting every facility of the subpath one triple forward changes the
/// movement cost by `Σ (f*_i − f_i) + Σ_{i ≠ o} c(o_i, σ(o_i))`; on
/// unit-weight instances this is at most `2·Σ f*_i − c(o, σ(o))`, emitted
/// as one aggregate entry. With general weights the per-facility bound
/// `w_i·c(o_i, σ(o_i)) ≤ f*_i + f_i` is emitted instead (one entry per
/// facility of the subpath); it requires the shared metric's triangle
/// inequality through the facility's start location.
pub fn check_shift_bound(
    paired: &PairedSolutions,
    decomposition: &Decomposition,
    s_slot: usize,
    o_slot: usize,
) -> Result<Vec<CheckEntry>> {
    let k = paired.k();
    if s_slot >= k || o_slot >= k {
        return Err(Error::InvalidArgument(format!(
            "subpath endpoints ({s_slot}, {o_slot}) out of range for k = {k}"
        )));
    }
    let seg_idx = decomposition.segment_of[s_slot];
    if decomposition.segment_of[o_slot] != seg_idx {
        return Err(Error::InvalidArgument(format!(
            "slots {s_slot} and {o_slot} lie on different decomposition elements"
        )));
    }
    let seg = &decomposition.segments[seg_idx];
    let slots = seg.slots();
    let mut pos = slots
        .iter()
        .position(|&u| u == s_slot)
        .expect("segment_of is consistent");
    let mut z = vec![s_slot];
    while slots[pos] != o_slot {
        pos += 1;
        if pos == slots.len() {
            if seg.is_cycle() {
                pos = 0;
            } else {
                return Err(Error::InvalidArgument(format!(
                    "slot {o_slot} is not reachable from slot {s_slot} along its path"
                )));
            }
        }
        z.push(slots[pos]);
    }

    let inst = paired.instance();
    if inst.is_unweighted() {
        let gains = sum(z.iter().map(|&i| sub(fin(paired.f_star[i]), fin(paired.f[i]))));
        let exits = sum(z.iter().filter(|&&i| i != o_slot).map(|&i| exit_dist(paired, i)));
        let lhs = add(gains, exits);
        let rhs = sub(
            mul(Some(2), sum(z.iter().map(|&i| fin(paired.f_star[i])))),
            exit_dist(paired, o_slot),
        );
        Ok(vec![entry("shift_bound", format!("subpath {s_slot}..{o_slot}"), lhs, rhs)])
    } else {
        Ok(z
            .iter()
            .map(|&i| {
                let w = inst.facilities()[i].weight as i128;
                let lhs = mul(Some(w), exit_dist(paired, i));
                let rhs = add(fin(paired.f_star[i]), fin(paired.f[i]));
                entry("shift_bound_weighted", format!("facility {i}"), lhs, rhs)
            })
            .collect())
    }
}

/// For every decomposition cycle: rerouting each facility of the cycle to
/// its predecessor's reference destination is a candidate matching of the
/// same destination set, so if the local matching is min-cost,
/// `0 ≤ Σ_i (−f_i + f*_i + w_i·c(o_i, σ(o_i)))` over cycle slots.
pub fn check_cycle_rematch(
    paired: &PairedSolutions,
    decomposition: &Decomposition,
) -> Vec<CheckEntry> {
    let inst = paired.instance();
    decomposition
        .segments
        .iter()
        .filter(|seg| seg.is_cycle())
        .map(|seg| {
            let slots = seg.slots();
            let rhs = sum(slots.iter().map(|&i| {
                let w = inst.facilities()[i].weight as i128;
                add(
                    sub(fin(paired.f_star[i]), fin(paired.f[i])),
                    mul(Some(w), exit_dist(paired, i)),
                )
            }));
            entry("cycle_rematch", format!("cycle {slots:?}"), Some(0), rhs)
        })
        .collect()
}

/// For each heavy-capture facility (class `S2`, capture-based variant)
/// with center `o`: `t·w_i·c(s_i, o) ≤ Σ_{j ∈ D*(capt(s_i))} d_j·(c_j + c*_j)`.
/// Every captured client can pay the trip because the captured demand
/// exceeds `max{w_i, w_cent}·t` by classification.
pub fn check_s2_distance(
    paired: &PairedSolutions,
    partition: &ClassPartition,
) -> Result<Vec<CheckEntry>> {
    if partition.variant != ClassVariant::CaptureBased {
        return Err(Error::InvalidArgument(
            "the center-distance check is stated for the capture-based classification".into(),
        ));
    }
    let inst = paired.instance();
    let t = partition.t as i128;
    Ok(partition
        .s2
        .iter()
        .map(|&i| {
            let c_slot = partition.cent[i].expect("S2 implies a non-empty capture set");
            let w = inst.facilities()[i].weight as i128;
            let center_dist = fin(inst.assign_dist(paired.s_loc(i), paired.o_loc(c_slot)));
            let lhs = mul(mul(Some(t), Some(w)), center_dist);
            let rhs = sum(partition.capt[i].iter().flat_map(|&o| {
                paired.d_star[o].iter().map(|&j| {
                    let d = inst.clients()[j].demand as i128;
                    mul(Some(d), add(fin(paired.c[j]), fin(paired.c_star[j])))
                })
            }));
            entry("s2_distance", format!("facility {i}"), lhs, rhs)
        })
        .collect())
}

/// Evaluates the real multi-swap closing a heavy-capture facility and its
/// feeder path starts while opening everything it captures, then checks
/// both sides of the swap inequality (path-decomposition variant,
/// unit facility weights; demands may vary).
///
/// With `X = {s} ∪ T(s)`, `Y = capt(s)`, `Δ = MFL((S∖X)∪Y) − MFL(S)` and
/// `o = cent(s)`, the upper bound (cross-multiplied by `t`) is
///
/// ```text
/// t·Δ ≤ t·Σ_{P feeding s, i ∈ P} 2f*_i
///     + Σ_{j ∈ D*(o)} d_j·((t+1)·c*_j − (t−1)·c_j)
///     + t·Σ_{j ∈ D(X) ∖ D*(o)} d_j·2c*_j
/// ```
///
/// and holds unconditionally for a valid classification. The lower bound
/// `0 ≤ Δ` expresses local optimality at radius `|X|`; it is emitted only
/// when the caller claims a certification radius `rho ≥ |X|` (and fails
/// honestly if that claim is false). When co-located destinations make
/// `(S∖X)∪Y` collapse below `k` locations, the swap is not a `k`-set move
/// and the check is skipped with an explanatory note.
pub fn check_s2_swap(
    paired: &PairedSolutions,
    decomposition: &Decomposition,
    partition: &ClassPartition,
    s_slot: usize,
    rho: usize,
) -> Result<(Vec<CheckEntry>, Vec<String>)> {
    if partition.variant != ClassVariant::PathDecomposition {
        return Err(Error::InvalidArgument(
            "the swap inequality is stated for the path-decomposition classification".into(),
        ));
    }
    let inst = paired.instance();
    if !inst.is_unweighted() {
        return Err(Error::InvalidArgument(
            "the swap inequality requires unit facility weights".into(),
        ));
    }
    if partition.class_of.get(s_slot) != Some(&FacilityClass::S2) {
        return Err(Error::InvalidArgument(format!(
            "slot {s_slot} is not in class S2"
        )));
    }

    let o_slot = partition.cent[s_slot].expect("S2 implies a non-empty capture set");
    let t_slots = decomposition.t_slots(s_slot);
    let mut x_locs: Vec<usize> = std::iter::once(paired.s_loc(s_slot))
        .chain(t_slots.iter().map(|&i| paired.s_loc(i)))
        .collect();
    x_locs.sort_unstable();
    x_locs.dedup();
    let mut y_locs: Vec<usize> =
        partition.capt[s_slot].iter().map(|&j| paired.o_loc(j)).collect();
    y_locs.sort_unstable();
    y_locs.dedup();

    let mut new_set: Vec<usize> = paired
        .local
        .destination_set()
        .into_iter()
        .filter(|loc| !x_locs.contains(loc))
        .chain(y_locs.iter().copied())
        .collect();
    new_set.sort_unstable();
    new_set.dedup();
    if new_set.len() != paired.k() {
        return Ok((
            Vec::new(),
            vec![format!(
                "s2_swap on facility {s_slot} skipped: opening {y_locs:?} for {x_locs:?} \
                 collapses the destination set to {} locations (co-located geometry)",
                new_set.len()
            )],
        ));
    }

    let (_, dests) = matching::movement_cost(inst, &new_set)?;
    let swapped = evaluate(inst, &dests)?;
    let delta = sub(fin(swapped.total), fin(paired.local.total));

    let clients = inst.clients();
    let mut in_dx = vec![false; clients.len()];
    for slot in std::iter::once(s_slot).chain(t_slots.iter().copied()) {
        for &j in &paired.d_local[slot] {
            in_dx[j] = true;
        }
    }
    let mut in_dstar_o = vec![false; clients.len()];
    for &j in &paired.d_star[o_slot] {
        in_dstar_o[j] = true;
    }

    let t = partition.t as i128;
    let feeder_movement = mul(
        Some(t),
        sum(decomposition.pc_paths(s_slot).iter().flat_map(|&pi| {
            decomposition.segments[pi]
                .slots()
                .iter()
                .map(|&i| mul(Some(2), fin(paired.f_star[i])))
        })),
    );
    let center_clients = sum(paired.d_star[o_slot].iter().map(|&j| {
        let d = clients[j].demand as i128;
        mul(
            Some(d),
            sub(
                mul(Some(t + 1), fin(paired.c_star[j])),
                mul(Some(t - 1), fin(paired.c[j])),
            ),
        )
    }));
    let displaced_clients = mul(
        Some(t),
        sum((0..clients.len()).filter(|&j| in_dx[j] && !in_dstar_o[j]).map(|j| {
            let d = clients[j].demand as i128;
            mul(Some(2 * d), fin(paired.c_star[j]))
        })),
    );
    let rhs = add(add(feeder_movement, center_clients), displaced_clients);
    let lhs = mul(Some(t), delta);

    let mut entries = vec![entry("s2_swap_upper", format!("facility {s_slot}"), lhs, rhs)];
    let mut notes = Vec::new();
    if rho >= x_locs.len() {
        entries.push(entry("s2_swap_lower", format!("facility {s_slot}"), Some(0), delta));
    } else {
        notes.push(format!(
            "s2_swap lower bound on facility {s_slot} skipped: needs certification \
             radius ≥ {}, caller claimed {rho}",
            x_locs.len()
        ));
    }
    Ok((entries, notes))
}

/// The end-to-end guarantee for single-swap local optima on a shared
/// metric against an exact optimum, cross-multiplied to integers:
/// `2·(F + C) ≤ 249·F* + 998·C*`.
pub fn check_global_ratio(paired: &PairedSolutions) -> CheckEntry {
    let lhs = mul(
        Some(2),
        add(fin(paired.local.matching_cost), fin(paired.local.assignment_cost)),
    );
    let rhs = add(
        mul(Some(249), fin(paired.reference.matching_cost)),
        mul(Some(998), fin(paired.reference.assignment_cost)),
    );
    entry("global_ratio", "totals".to_string(), lhs, rhs)
}
