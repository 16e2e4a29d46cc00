//! Symmetric distance matrices over the shared location set.
//!
//! A [`Metric`] stores an `n x n` matrix of [`Cost`] values flattened
//! row-major. Instances may carry one metric (used for both facility
//! movement and client assignment) or two separate ones. Matrices given
//! explicitly are validated; edge lists are completed to shortest-path
//! distances first, which always yields a valid metric on the reachable
//! part and `INF` between different components.

use serde::{Deserialize, Serialize};

use crate::cost::{self, Cost, INF};
use crate::error::{Error, Result};

/// Maximum number of violations [`Metric::validate`] collects before
/// stopping; enough for diagnostics without cubic-size reports.
const MAX_VIOLATIONS: usize = 64;

/// One reason a matrix is not a metric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricViolation {
    /// `d(v, v)` is not zero.
    NonzeroDiagonal { v: usize, value: Cost },
    /// `d(u, v) != d(v, u)`.
    Asymmetric {
        u: usize,
        v: usize,
        forward: Cost,
        backward: Cost,
    },
    /// `d(u, v) > d(u, via) + d(via, v)`.
    Triangle {
        u: usize,
        v: usize,
        via: usize,
        direct: Cost,
        detour: Cost,
    },
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricViolation::NonzeroDiagonal { v, value } => {
                write!(f, "d({v},{v}) = {} but must be 0", cost::fmt_cost(*value))
            }
            MetricViolation::Asymmetric {
                u,
                v,
                forward,
                backward,
            } => write!(
                f,
                "d({u},{v}) = {} but d({v},{u}) = {}",
                cost::fmt_cost(*forward),
                cost::fmt_cost(*backward)
            ),
            MetricViolation::Triangle {
                u,
                v,
                via,
                direct,
                detour,
            } => write!(
                f,
                "d({u},{v}) = {} exceeds d({u},{via}) + d({via},{v}) = {}",
                cost::fmt_cost(*direct),
                cost::fmt_cost(*detour)
            ),
        }
    }
}

/// Symmetric distance matrix on `n` locations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metric {
    n: usize,
    /// Row-major `n * n` distances.
    dist: Vec<Cost>,
}

impl Metric {
    /// Build from a square matrix without altering the entries.
    /// The caller is responsible for validating metric properties.
    pub fn from_matrix(rows: Vec<Vec<Cost>>) -> Result<Self> {
        let n = rows.len();
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "distance matrix is not square: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            dist.extend(row);
        }
        Ok(Metric { n, dist })
    }

    /// Build the shortest-path completion of an undirected weighted edge
    /// list: parallel edges keep the cheapest weight, missing pairs end up
    /// at the shortest connecting path or `INF` when disconnected.
    pub fn closure_from_edges(n: usize, edges: &[(usize, usize, Cost)]) -> Result<Self> {
        let mut m = Metric {
            n,
            dist: vec![INF; n * n],
        };
        for v in 0..n {
            m.dist[v * n + v] = 0;
        }
        for &(u, v, c) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({u},{v}) references a location outside 0..{n}"
                )));
            }
            let idx = u * n + v;
            if c < m.dist[idx] {
                m.dist[idx] = c;
                m.dist[v * n + u] = c;
            }
        }
        m.close();
        Ok(m)
    }

    /// Build from a square matrix and replace every entry by the shortest
    /// path it participates in. Useful for repairing near-metric inputs
    /// such as rounded Euclidean distances.
    pub fn closed_from_matrix(rows: Vec<Vec<Cost>>) -> Result<Self> {
        let mut m = Self::from_matrix(rows)?;
        m.close();
        Ok(m)
    }

    /// Number of locations.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between two locations.
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Cost {
        self.dist[u * self.n + v]
    }

    /// Largest finite entry, or 0 when every off-diagonal entry is `INF`.
    pub fn max_finite(&self) -> Cost {
        self.dist
            .iter()
            .copied()
            .filter(|&c| !cost::is_inf(c))
            .max()
            .unwrap_or(0)
    }

    /// Floyd-Warshall shortest-path completion in place, with saturating
    /// addition so `INF` stays absorbing.
    pub fn close(&mut self) {
        let n = self.n;
        for via in 0..n {
            for u in 0..n {
                let d_u_via = self.dist[u * n + via];
                if cost::is_inf(d_u_via) {
                    continue;
                }
                for v in 0..n {
                    let detour = cost::add(d_u_via, self.dist[via * n + v]);
                    if detour < self.dist[u * n + v] {
                        self.dist[u * n + v] = detour;
                    }
                }
            }
        }
    }

    /// Collect violations of the metric axioms, up to an internal cap.
    /// An empty result means the matrix is a metric (allowing `INF` for
    /// mutually unreachable pairs and distance 0 between distinct points).
    pub fn validate(&self) -> Vec<MetricViolation> {
        let n = self.n;
        let mut out = Vec::new();
        for v in 0..n {
            if self.get(v, v) != 0 {
                out.push(MetricViolation::NonzeroDiagonal {
                    v,
                    value: self.get(v, v),
                });
                if out.len() >= MAX_VIOLATIONS {
                    return out;
                }
            }
        }
        for u in 0..n {
            for v in (u + 1)..n {
                let forward = self.get(u, v);
                let backward = self.get(v, u);
                if forward != backward {
                    out.push(MetricViolation::Asymmetric {
                        u,
                        v,
                        forward,
                        backward,
                    });
                    if out.len() >= MAX_VIOLATIONS {
                        return out;
                    }
                }
            }
        }
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let direct = self.get(u, v);
                for via in 0..n {
                    if via == u || via == v {
                        continue;
                    }
                    let detour = cost::add(self.get(u, via), self.get(via, v));
                    if direct > detour {
                        out.push(MetricViolation::Triangle {
                            u,
                            v,
                            via,
                            direct,
                            detour,
                        });
                        if out.len() >= MAX_VIOLATIONS {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    /// `true` when [`Metric::validate`] finds nothing.
    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Copy out as nested rows (for serialization).
    pub fn to_rows(&self) -> Vec<Vec<Cost>> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.get(u, v)).collect())
            .collect()
    }
}
