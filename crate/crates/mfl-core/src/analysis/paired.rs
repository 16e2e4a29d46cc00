//! A local solution and a reference solution of the same instance, with
//! the per-facility and per-client quantities every downstream check
//! consumes.
//!
//! Conventions: slot `i` is the facility index; `s_i` is its destination
//! in the local solution and `o_i` in the reference solution. `f_i` and
//! `f*_i` are the weighted movement costs to those destinations; `c_j`
//! and `c*_j` are the plain (demand-unweighted) assignment distances of
//! client `j`. The nearest-destination maps `σ` and `σ*` are extended to
//! every location of the instance, with ties broken toward the lowest
//! location index — on client locations they agree with the solutions'
//! stored assignments.

use crate::cost::{Cost, INF};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::solution::{evaluate, nearest_in_set, Solution};

/// A (local, reference) solution pair with derived analysis data.
#[derive(Debug, Clone)]
pub struct PairedSolutions<'a> {
    instance: &'a Instance,
    /// The local solution (the "S side").
    pub local: Solution,
    /// The reference solution (the "O side").
    pub reference: Solution,
    /// Per slot: weighted movement cost to the local destination.
    pub f: Vec<Cost>,
    /// Per slot: weighted movement cost to the reference destination.
    pub f_star: Vec<Cost>,
    /// Per client: assignment distance in the local solution.
    pub c: Vec<Cost>,
    /// Per client: assignment distance in the reference solution.
    pub c_star: Vec<Cost>,
    /// Per location: nearest local destination (lowest index on ties).
    pub sigma_loc: Vec<usize>,
    /// Per location: nearest reference destination.
    pub sigma_star_loc: Vec<usize>,
    /// Per location: the slot whose local destination is that location.
    pub s_slot_of_loc: Vec<Option<usize>>,
    /// Per location: the slot whose reference destination is that location.
    pub o_slot_of_loc: Vec<Option<usize>>,
    /// Per slot: clients assigned to `s_i` in the local solution.
    pub d_local: Vec<Vec<usize>>,
    /// Per slot: clients assigned to `o_i` in the reference solution.
    pub d_star: Vec<Vec<usize>>,
    /// Per slot: demand-weighted size of `d_star[i]`, summed exactly in
    /// 128 bits so classification thresholds never see saturation.
    pub n_star: Vec<u128>,
}

impl<'a> PairedSolutions<'a> {
    /// The instance both solutions live on.
    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Number of facilities.
    pub fn k(&self) -> usize {
        self.local.destinations.len()
    }

    /// The local destination of slot `i`.
    pub fn s_loc(&self, i: usize) -> usize {
        self.local.destinations[i]
    }

    /// The reference destination of slot `i`.
    pub fn o_loc(&self, i: usize) -> usize {
        self.reference.destinations[i]
    }
}

fn validate_side(instance: &Instance, solution: &Solution, side: &str) -> Result<()> {
    let fresh = evaluate(instance, &solution.destinations).map_err(|e| {
        Error::InvalidSolution(format!("{side} solution does not fit the instance: {e}"))
    })?;
    if &fresh != solution {
        return Err(Error::InvalidSolution(format!(
            "{side} solution disagrees with re-evaluation on this instance \
             (stated total {}, recomputed {})",
            solution.total, fresh.total
        )));
    }
    if solution.total == INF {
        return Err(Error::InvalidSolution(format!(
            "{side} solution has infinite total cost; checks need finite arithmetic"
        )));
    }
    Ok(())
}

/// Pair a local and a reference solution of the same instance.
///
/// Both are strictly re-validated: destinations must be canonical, stated
/// costs must match re-evaluation exactly, and totals must be finite.
pub fn pair<'a>(
    instance: &'a Instance,
    local: &Solution,
    reference: &Solution,
) -> Result<PairedSolutions<'a>> {
    validate_side(instance, local, "local")?;
    validate_side(instance, reference, "reference")?;

    let n = instance.n();
    let k = instance.k();
    let f: Vec<Cost> = (0..k)
        .map(|i| instance.weighted_move_cost(i, local.destinations[i]))
        .collect();
    let f_star: Vec<Cost> = (0..k)
        .map(|i| instance.weighted_move_cost(i, reference.destinations[i]))
        .collect();
    let c: Vec<Cost> = instance
        .clients()
        .iter()
        .enumerate()
        .map(|(j, cl)| instance.assign_dist(cl.loc, local.sigma[j]))
        .collect();
    let c_star: Vec<Cost> = instance
        .clients()
        .iter()
        .enumerate()
        .map(|(j, cl)| instance.assign_dist(cl.loc, reference.sigma[j]))
        .collect();

    let s_set = local.destination_set();
    let o_set = reference.destination_set();
    let sigma_loc: Vec<usize> = (0..n).map(|v| nearest_in_set(instance, &s_set, v).0).collect();
    let sigma_star_loc: Vec<usize> =
        (0..n).map(|v| nearest_in_set(instance, &o_set, v).0).collect();

    let mut s_slot_of_loc = vec![None; n];
    let mut o_slot_of_loc = vec![None; n];
    for i in 0..k {
        s_slot_of_loc[local.destinations[i]] = Some(i);
        o_slot_of_loc[reference.destinations[i]] = Some(i);
    }

    let mut d_local = vec![Vec::new(); k];
    let mut d_star = vec![Vec::new(); k];
    for (j, _) in instance.clients().iter().enumerate() {
        let s_slot = s_slot_of_loc[local.sigma[j]]
            .expect("sigma maps every client onto a destination");
        d_local[s_slot].push(j);
        let o_slot = o_slot_of_loc[reference.sigma[j]]
            .expect("sigma maps every client onto a destination");
        d_star[o_slot].push(j);
    }
    let n_star: Vec<u128> = d_star
        .iter()
        .map(|js| js.iter().map(|&j| instance.clients()[j].demand as u128).sum())
        .collect();

    Ok(PairedSolutions {
        instance,
        local: local.clone(),
        reference: reference.clone(),
        f,
        f_star,
        c,
        c_star,
        sigma_loc,
        sigma_star_loc,
        s_slot_of_loc,
        o_slot_of_loc,
        d_local,
        d_star,
        n_star,
    })
}
