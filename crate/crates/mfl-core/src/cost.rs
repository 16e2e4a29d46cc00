//! Integer cost arithmetic shared by every component.
//!
//! Costs are non-negative integers in fixed-point units (the JSON loader
//! multiplies decimal inputs by the instance scale to land here). The
//! maximum `u64` value is reserved as the [`INF`] sentinel for
//! "unreachable". Saturating arithmetic gives the sentinel the semantics
//! we want without a dedicated enum: any sum involving `INF` is `INF`,
//! any positive multiple of `INF` is `INF`, and a zero weight or demand
//! annihilates it (`0 * INF == 0`, so a zero-demand client never makes a
//! total unreachable).

/// Non-negative cost in fixed-point units.
pub type Cost = u64;

/// Sentinel for unreachable distances and forbidden assignments.
pub const INF: Cost = u64::MAX;

/// Saturating addition; `INF` is absorbing.
#[inline]
pub fn add(a: Cost, b: Cost) -> Cost {
    a.saturating_add(b)
}

/// Saturating multiplication by a weight or demand; `0 * INF == 0`.
#[inline]
pub fn mul(factor: u64, c: Cost) -> Cost {
    factor.saturating_mul(c)
}

/// Saturating sum of an iterator of costs.
#[inline]
pub fn sum(costs: impl IntoIterator<Item = Cost>) -> Cost {
    costs.into_iter().fold(0, add)
}

/// `true` when the value is the unreachable sentinel.
#[inline]
pub fn is_inf(c: Cost) -> bool {
    c == INF
}

/// Render a cost for human-readable output (`INF` for the sentinel).
pub fn fmt_cost(c: Cost) -> String {
    if is_inf(c) {
        "INF".to_string()
    } else {
        c.to_string()
    }
}
