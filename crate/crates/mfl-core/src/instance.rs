//! Problem instances and their versioned JSON interchange format.
//!
//! An instance consists of a shared location set `0..n`, an assignment
//! metric (client-to-destination distances), an optional separate movement
//! metric (facility relocation distances; defaults to the assignment
//! metric), weighted facilities with initial locations, and demand-weighted
//! clients.
//!
//! # JSON format (version 1)
//!
//! ```json
//! {
//!   "version": 1,
//!   "n": 4,
//!   "assign_edges": [[0, 1, 5], [1, 2, "INF"]],
//!   "scale": 1,
//!   "facilities": [{"loc": 0, "weight": 1}],
//!   "clients": [{"loc": 3, "demand": 2}]
//! }
//! ```
//!
//! Exactly one of `assign_edges` / `assign_matrix` must be present; edge
//! lists are completed to shortest-path distances, matrices are validated
//! as given. `move_edges` / `move_matrix` are optional (at most one); when
//! absent the movement metric aliases the assignment metric. Every cost
//! entry may be a non-negative integer, a non-negative decimal, or the
//! string `"INF"`. Decimal entries are multiplied by `scale` (default 1)
//! and must land on an integer (absolute tolerance 1e-6, magnitude below
//! 2^53); integer entries are multiplied by `scale` exactly. Weights and
//! demands are plain non-negative integers and are never scaled.
//!
//! Serialization always emits dense matrices with `scale` 1, writing the
//! unreachable sentinel as `"INF"`; parse → serialize → parse is the
//! identity.

use serde::{Deserialize, Serialize};

use crate::cost::{Cost, INF};
use crate::error::{Error, Result};
use crate::metric::Metric;

/// A facility: initial location plus movement-cost weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Facility {
    /// Initial location index.
    pub loc: usize,
    /// Movement weight: moving this facility over distance `c` costs `weight * c`.
    pub weight: u64,
}

/// A client: location plus demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Client {
    /// Location index.
    pub loc: usize,
    /// Demand: being served over distance `c` costs `demand * c`.
    pub demand: u64,
}

/// A validated mobile facility location instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    n: usize,
    assign: Metric,
    /// `None` means the movement metric aliases the assignment metric.
    movement: Option<Metric>,
    facilities: Vec<Facility>,
    clients: Vec<Client>,
}

impl Instance {
    /// Build and validate an instance. `movement: None` shares the
    /// assignment metric. Both metrics must already satisfy the metric
    /// axioms (closure-built metrics always do).
    pub fn new(
        assign: Metric,
        movement: Option<Metric>,
        facilities: Vec<Facility>,
        clients: Vec<Client>,
    ) -> Result<Self> {
        let n = assign.n();
        if n == 0 {
            return Err(Error::InvalidInstance("location count must be ≥ 1".into()));
        }
        if let Some(m) = &movement {
            if m.n() != n {
                return Err(Error::InvalidInstance(format!(
                    "movement metric has {} locations but assignment metric has {n}",
                    m.n()
                )));
            }
        }
        let violations = assign.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidMetric {
                which: "assign",
                violations,
            });
        }
        if let Some(m) = &movement {
            let violations = m.validate();
            if !violations.is_empty() {
                return Err(Error::InvalidMetric {
                    which: "move",
                    violations,
                });
            }
        }
        let k = facilities.len();
        if k == 0 {
            return Err(Error::InvalidInstance("at least one facility required".into()));
        }
        if k > n {
            return Err(Error::InvalidInstance(format!(
                "{k} facilities but only {n} locations (k ≤ n required)"
            )));
        }
        for (i, f) in facilities.iter().enumerate() {
            if f.loc >= n {
                return Err(Error::InvalidInstance(format!(
                    "facility {i} at location {} but n = {n}",
                    f.loc
                )));
            }
        }
        for (j, c) in clients.iter().enumerate() {
            if c.loc >= n {
                return Err(Error::InvalidInstance(format!(
                    "client {j} at location {} but n = {n}",
                    c.loc
                )));
            }
        }
        Ok(Instance {
            n,
            assign,
            movement,
            facilities,
            clients,
        })
    }

    /// Instance whose movement metric aliases the assignment metric.
    pub fn single_metric(
        metric: Metric,
        facilities: Vec<Facility>,
        clients: Vec<Client>,
    ) -> Result<Self> {
        Self::new(metric, None, facilities, clients)
    }

    /// Number of locations.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of facilities.
    #[inline]
    pub fn k(&self) -> usize {
        self.facilities.len()
    }

    /// The client-assignment metric.
    #[inline]
    pub fn assign_metric(&self) -> &Metric {
        &self.assign
    }

    /// The facility-movement metric (the assignment metric when shared).
    #[inline]
    pub fn move_metric(&self) -> &Metric {
        self.movement.as_ref().unwrap_or(&self.assign)
    }

    /// `true` when movement and assignment use the same distances, either
    /// by aliasing or by equal matrices.
    pub fn has_shared_metric(&self) -> bool {
        match &self.movement {
            None => true,
            Some(m) => *m == self.assign,
        }
    }

    /// All facilities.
    #[inline]
    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    /// All clients.
    #[inline]
    pub fn clients(&self) -> &[Client] {
        &self.clients
    }

    /// Client-assignment distance between two locations.
    #[inline]
    pub fn assign_dist(&self, u: usize, v: usize) -> Cost {
        self.assign.get(u, v)
    }

    /// Facility-movement distance between two locations.
    #[inline]
    pub fn move_dist(&self, u: usize, v: usize) -> Cost {
        self.move_metric().get(u, v)
    }

    /// Weighted cost of moving facility `i` to `loc`.
    #[inline]
    pub fn weighted_move_cost(&self, i: usize, loc: usize) -> Cost {
        let f = &self.facilities[i];
        crate::cost::mul(f.weight, self.move_dist(f.loc, loc))
    }

    /// `true` when every facility weight is exactly 1.
    pub fn is_unweighted(&self) -> bool {
        self.facilities.iter().all(|f| f.weight == 1)
    }

    /// Parse from the version-1 JSON format.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(s)?;
        file.into_instance()
    }

    /// Serialize to the version-1 JSON format (dense matrices, scale 1,
    /// `"INF"` tokens, trailing newline). Deterministic byte-for-byte.
    pub fn to_json_string(&self) -> String {
        let file = InstanceFile {
            version: 1,
            n: self.n,
            assign_edges: None,
            assign_matrix: Some(matrix_to_raw(&self.assign)),
            move_edges: None,
            move_matrix: self.movement.as_ref().map(matrix_to_raw),
            scale: 1,
            facilities: self.facilities.clone(),
            clients: self.clients.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("instance serialization");
        s.push('\n');
        s
    }
}

/// One cost entry as it appears in JSON: integer, decimal, or `"INF"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawCost {
    Int(u64),
    Float(f64),
    Text(String),
}

impl RawCost {
    /// Resolve to a fixed-point cost under `scale`. Context names the
    /// offending entry in error messages.
    fn resolve(&self, scale: u64, context: &str) -> Result<Cost> {
        match self {
            RawCost::Int(v) => {
                let scaled = v.checked_mul(scale).ok_or_else(|| {
                    Error::InvalidInstance(format!("{context}: {v} * scale {scale} overflows"))
                })?;
                if scaled == INF {
                    return Err(Error::InvalidInstance(format!(
                        "{context}: {v} * scale {scale} collides with the reserved \
                         unreachable sentinel; write \"INF\" instead"
                    )));
                }
                Ok(scaled)
            }
            RawCost::Float(v) => {
                if !v.is_finite() || *v < 0.0 {
                    return Err(Error::InvalidInstance(format!(
                        "{context}: cost {v} must be a finite non-negative number"
                    )));
                }
                let scaled = v * scale as f64;
                let rounded = scaled.round();
                if (scaled - rounded).abs() > 1e-6 {
                    return Err(Error::InvalidInstance(format!(
                        "{context}: {v} * scale {scale} = {scaled} is not an integer; \
                         increase \"scale\" so all costs land on integers"
                    )));
                }
                if rounded >= 9_007_199_254_740_992.0 {
                    return Err(Error::InvalidInstance(format!(
                        "{context}: {v} * scale {scale} exceeds 2^53; decimal costs this \
                         large lose precision — use integer entries"
                    )));
                }
                Ok(rounded as u64)
            }
            RawCost::Text(s) => {
                if s == "INF" {
                    Ok(INF)
                } else {
                    Err(Error::InvalidInstance(format!(
                        "{context}: unrecognized cost token {s:?} (only \"INF\" is allowed)"
                    )))
                }
            }
        }
    }
}

fn raw_of(c: Cost) -> RawCost {
    if c == INF {
        RawCost::Text("INF".to_string())
    } else {
        RawCost::Int(c)
    }
}

fn matrix_to_raw(m: &Metric) -> Vec<Vec<RawCost>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(raw_of).collect())
        .collect()
}

fn default_scale() -> u64 {
    1
}

/// On-disk shape of the version-1 instance format.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    version: u32,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    assign_edges: Option<Vec<(usize, usize, RawCost)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    assign_matrix: Option<Vec<Vec<RawCost>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    move_edges: Option<Vec<(usize, usize, RawCost)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    move_matrix: Option<Vec<Vec<RawCost>>>,
    #[serde(default = "default_scale")]
    scale: u64,
    facilities: Vec<Facility>,
    clients: Vec<Client>,
}

impl InstanceFile {
    fn into_instance(self) -> Result<Instance> {
        if self.version != 1 {
            return Err(Error::InvalidInstance(format!(
                "unsupported format version {} (this tool reads version 1)",
                self.version
            )));
        }
        if self.scale == 0 {
            return Err(Error::InvalidInstance("scale must be ≥ 1".into()));
        }
        let assign = build_metric(
            "assign",
            self.n,
            self.scale,
            self.assign_edges,
            self.assign_matrix,
            true,
        )?
        .expect("required metric");
        let movement = build_metric(
            "move",
            self.n,
            self.scale,
            self.move_edges,
            self.move_matrix,
            false,
        )?;
        Instance::new(assign, movement, self.facilities, self.clients)
    }
}

/// Resolve one metric from the edge-list or matrix form.
fn build_metric(
    which: &'static str,
    n: usize,
    scale: u64,
    edges: Option<Vec<(usize, usize, RawCost)>>,
    matrix: Option<Vec<Vec<RawCost>>>,
    required: bool,
) -> Result<Option<Metric>> {
    match (edges, matrix) {
        (Some(_), Some(_)) => Err(Error::InvalidInstance(format!(
            "give either {which}_edges or {which}_matrix, not both"
        ))),
        (None, None) => {
            if required {
                Err(Error::InvalidInstance(format!(
                    "one of {which}_edges or {which}_matrix is required"
                )))
            } else {
                Ok(None)
            }
        }
        (Some(edges), None) => {
            let mut resolved = Vec::with_capacity(edges.len());
            for (idx, (u, v, c)) in edges.iter().enumerate() {
                let cost = c.resolve(scale, &format!("{which}_edges[{idx}]"))?;
                resolved.push((*u, *v, cost));
            }
            Metric::closure_from_edges(n, &resolved).map(Some)
        }
        (None, Some(rows)) => {
            if rows.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "{which}_matrix has {} rows but n = {n}",
                    rows.len()
                )));
            }
            let mut out = Vec::with_capacity(n);
            for (u, row) in rows.into_iter().enumerate() {
                if row.len() != n {
                    return Err(Error::InvalidInstance(format!(
                        "{which}_matrix row {u} has {} entries but n = {n}",
                        row.len()
                    )));
                }
                let mut out_row = Vec::with_capacity(n);
                for (v, c) in row.into_iter().enumerate() {
                    out_row.push(c.resolve(scale, &format!("{which}_matrix[{u}][{v}]"))?);
                }
                out.push(out_row);
            }
            let metric = Metric::from_matrix(out)?;
            Ok(Some(metric))
        }
    }
}
