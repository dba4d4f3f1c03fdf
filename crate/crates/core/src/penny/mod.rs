//! Penny realizations: unit-diameter disk centers, their contact graphs, the
//! generator families and the geometric checks that go with them.

mod circle;
mod generators;
mod io;

pub use circle::{circumcircle_classify, CircumcircleReport};
pub use generators::{generate_realization, perturb, Family};
pub use io::{read_realization, realization_from_json, realization_to_json, write_realization};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::numkernel::{QuadRational, TolerancePolicy};

/// Exact planar point `(x, y)` with coordinates in Q(√3).
pub type ExactPoint = [QuadRational; 2];

/// Disk centers in units of the disk diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub name: String,
    pub points: Vec<[f64; 2]>,
    pub exact: Option<Vec<ExactPoint>>,
}

impl Realization {
    pub fn new(name: impl Into<String>, points: Vec<[f64; 2]>) -> Self {
        Realization {
            name: name.into(),
            points,
            exact: None,
        }
    }

    /// Float coordinates are derived from the exact ones.
    pub fn from_exact(name: impl Into<String>, exact: Vec<ExactPoint>) -> Self {
        let points = exact
            .iter()
            .map(|[x, y]| [x.to_f64(), y.to_f64()])
            .collect();
        Realization {
            name: name.into(),
            points,
            exact: Some(exact),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn exact_squared_distance(&self, i: usize, j: usize) -> Option<QuadRational> {
        let exact = self.exact.as_ref()?;
        let dx = &exact[i][0] - &exact[j][0];
        let dy = &exact[i][1] - &exact[j][1];
        Some(&(&dx * &dx) + &(&dy * &dy))
    }

    /// Squared distance, taken from exact coordinates when present.
    pub fn squared_distance(&self, i: usize, j: usize) -> f64 {
        if let Some(d) = self.exact_squared_distance(i, j) {
            return d.to_f64();
        }
        let [xi, yi] = self.points[i];
        let [xj, yj] = self.points[j];
        let (dx, dy) = (xi - xj, yi - yj);
        dx * dx + dy * dy
    }

    /// Drops the point at `index`, keeping exact data aligned.
    pub fn without_point(&self, index: usize) -> Realization {
        let keep = |v: usize| v != index;
        Realization {
            name: format!("{}-minus-{index}", self.name),
            points: (0..self.len())
                .filter(|&v| keep(v))
                .map(|v| self.points[v])
                .collect(),
            exact: self.exact.as_ref().map(|e| {
                (0..e.len())
                    .filter(|&v| keep(v))
                    .map(|v| e[v].clone())
                    .collect()
            }),
        }
    }

    /// Checks finiteness, exact/float agreement and disjoint interiors.
    pub fn validate_packing(&self, policy: &TolerancePolicy) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::Format(format!(
                    "point {i} has a non-finite coordinate"
                )));
            }
        }
        if let Some(exact) = &self.exact {
            if exact.len() != self.points.len() {
                return Err(Error::Format(format!(
                    "{} exact points for {} float points",
                    exact.len(),
                    self.points.len()
                )));
            }
            for (index, (e, p)) in exact.iter().zip(&self.points).enumerate() {
                if (e[0].to_f64() - p[0]).abs() > policy.contact
                    || (e[1].to_f64() - p[1]).abs() > policy.contact
                {
                    return Err(Error::ExactMismatch { index });
                }
            }
        }
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let dist_sq = self.squared_distance(i, j);
                if dist_sq < 1.0 - policy.contact {
                    return Err(Error::Packing { i, j, dist_sq });
                }
            }
        }
        Ok(())
    }
}

/// Contact graph together with pairs that fell just outside contact tolerance.
#[derive(Debug, Clone)]
pub struct ContactGraph {
    pub graph: Graph,
    /// Non-contact pairs with squared distance in `(1 + τ_c, 1 + 10τ_c)`.
    pub dead_zone: Vec<DeadZonePair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeadZonePair {
    pub i: usize,
    pub j: usize,
    pub dist_sq: f64,
}

/// Edge iff `|‖pᵢ - pⱼ‖² - 1| ≤ τ_c`. Fails on overlapping disks.
pub fn contact_graph(r: &Realization, policy: &TolerancePolicy) -> Result<ContactGraph> {
    r.validate_packing(policy)?;
    let n = r.len();
    let mut graph = Graph::empty(n);
    let mut dead_zone = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let dist_sq = r.squared_distance(i, j);
            let excess = dist_sq - 1.0;
            if excess.abs() <= policy.contact {
                graph.add_edge(i, j)?;
            } else if excess < 10.0 * policy.contact {
                dead_zone.push(DeadZonePair { i, j, dist_sq });
            }
        }
    }
    Ok(ContactGraph { graph, dead_zone })
}

/// Largest edge count `floor(3n - √(12n - 3))` of a penny graph on `n` nodes.
pub fn harborth_bound(n: usize) -> usize {
    assert!(n >= 1, "harborth_bound needs n >= 1");
    let radicand = 12 * n - 3;
    let s = isqrt(radicand);
    if s * s == radicand {
        3 * n - s
    } else {
        // floor(3n - s') with s < s' < s + 1
        3 * n - s - 1
    }
}

fn isqrt(v: usize) -> usize {
    let mut s = (v as f64).sqrt() as usize;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}
