use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::FamilyClass;
use crate::numkernel::QuadRational;

use super::Realization;

/// Named realization families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `n` points on a circle of radius `n`, consecutive chords of length 1.
    PathArc,
    /// `(i, 0)` for `i = 0..n`, exact.
    PathCollinear,
    /// Two arcs on one circle separated by a gap of three contact angles.
    UnionPathsArc,
    /// Regular `n`-gon with unit side.
    CyclePolygon,
    /// One center disk touching `k = n - 1 ∈ {4, 5, 6}` petals.
    Flower,
    /// Two rows of the unit triangular lattice, exact.
    LatticeStrip,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::PathArc,
        Family::PathCollinear,
        Family::UnionPathsArc,
        Family::CyclePolygon,
        Family::Flower,
        Family::LatticeStrip,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PathArc => "path",
            Family::PathCollinear => "collinear",
            Family::UnionPathsArc => "union",
            Family::CyclePolygon => "cycle",
            Family::Flower => "flower",
            Family::LatticeStrip => "strip",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::PathArc | Family::PathCollinear | Family::UnionPathsArc => 2,
            Family::CyclePolygon | Family::LatticeStrip => 3,
            Family::Flower => 5,
        }
    }

    pub fn max_n(self) -> Option<usize> {
        match self {
            Family::Flower => Some(7),
            _ => None,
        }
    }

    pub fn accepts(self, n: usize) -> bool {
        n >= self.min_n() && self.max_n().is_none_or(|m| n <= m)
    }

    /// Family class of the contact graph this generator produces.
    pub fn intended_class(self, n: usize) -> FamilyClass {
        match self {
            Family::PathArc | Family::PathCollinear => FamilyClass::Path,
            Family::UnionPathsArc => FamilyClass::UnionOfPaths,
            Family::CyclePolygon => FamilyClass::Cycle,
            Family::Flower => FamilyClass::Other,
            Family::LatticeStrip if n == 3 => FamilyClass::Cycle,
            Family::LatticeStrip => FamilyClass::Other,
        }
    }

    /// Corank the certificate should reach for `n ≥ 5`.
    pub fn expected_corank(self, n: usize) -> usize {
        match self {
            Family::PathArc
            | Family::PathCollinear
            | Family::UnionPathsArc
            | Family::CyclePolygon => n - 3,
            Family::Flower | Family::LatticeStrip => n - 4,
        }
    }

    /// Whether generated points lie on one circle.
    pub fn is_concyclic(self, n: usize) -> bool {
        match self {
            Family::PathArc | Family::UnionPathsArc | Family::CyclePolygon => true,
            Family::PathCollinear => n <= 2,
            Family::LatticeStrip => n == 3,
            Family::Flower => false,
        }
    }

    pub fn has_exact(self) -> bool {
        matches!(self, Family::PathCollinear | Family::LatticeStrip)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "path" | "path-arc" | "patharc" => Ok(Family::PathArc),
            "collinear" | "path-collinear" | "pathcollinear" => Ok(Family::PathCollinear),
            "union" | "union-paths" | "union-paths-arc" | "unionpathsarc" => {
                Ok(Family::UnionPathsArc)
            }
            "cycle" | "cycle-polygon" | "polygon" | "cyclepolygon" => Ok(Family::CyclePolygon),
            "flower" => Ok(Family::Flower),
            "strip" | "lattice-strip" | "latticestrip" => Ok(Family::LatticeStrip),
            other => Err(Error::Parameter(format!("unknown family `{other}`"))),
        }
    }
}

/// Builds the `family` realization on `n` points.
pub fn generate_realization(family: Family, n: usize) -> Result<Realization> {
    if !family.accepts(n) {
        let range = match family.max_n() {
            Some(max) => format!("{}..={max}", family.min_n()),
            None => format!(">= {}", family.min_n()),
        };
        return Err(Error::Parameter(format!(
            "family {family} needs n {range}, got {n}"
        )));
    }
    let name = format!("{family}-{n}");
    Ok(match family {
        Family::PathArc => path_arc(name, n),
        Family::PathCollinear => path_collinear(name, n),
        Family::UnionPathsArc => union_paths_arc(name, n, 2),
        Family::CyclePolygon => cycle_polygon(name, n),
        Family::Flower => flower(name, n - 1),
        Family::LatticeStrip => lattice_strip(name, n),
    })
}

fn contact_angle(radius: f64) -> f64 {
    2.0 * (1.0 / (2.0 * radius)).asin()
}

fn on_circle(radius: f64, angles: impl Iterator<Item = f64>) -> Vec<[f64; 2]> {
    angles
        .map(|t| [radius * t.cos(), radius * t.sin()])
        .collect()
}

fn path_arc(name: String, n: usize) -> Realization {
    let radius = n as f64;
    let theta = contact_angle(radius);
    Realization::new(name, on_circle(radius, (0..n).map(|i| i as f64 * theta)))
}

fn path_collinear(name: String, n: usize) -> Realization {
    let exact = (0..n)
        .map(|i| [QuadRational::from_int(i as i64), QuadRational::zero()])
        .collect();
    Realization::from_exact(name, exact)
}

fn union_paths_arc(name: String, n: usize, parts: usize) -> Realization {
    let radius = n as f64;
    let theta = contact_angle(radius);
    let mut angles = Vec::with_capacity(n);
    let mut angle = 0.0;
    for part in 0..parts {
        let size = n / parts + usize::from(part < n % parts);
        for k in 0..size {
            if k > 0 {
                angle += theta;
            }
            angles.push(angle);
        }
        angle += 3.0 * theta;
    }
    Realization::new(name, on_circle(radius, angles.into_iter()))
}

fn cycle_polygon(name: String, n: usize) -> Realization {
    let radius = 1.0 / (2.0 * (PI / n as f64).sin());
    let step = 2.0 * PI / n as f64;
    Realization::new(name, on_circle(radius, (0..n).map(|i| i as f64 * step)))
}

fn flower(name: String, k: usize) -> Realization {
    let step = 2.0 * PI / k as f64;
    let mut points = vec![[0.0, 0.0]];
    points.extend(on_circle(1.0, (0..k).map(|j| j as f64 * step)));
    Realization::new(name, points)
}

// bottom row (i, 0) first, then top row (j + 1/2, √3/2)
fn lattice_strip(name: String, n: usize) -> Realization {
    let bottom = n.div_ceil(2);
    let mut exact = Vec::with_capacity(n);
    for i in 0..bottom {
        exact.push([QuadRational::from_int(i as i64), QuadRational::zero()]);
    }
    for j in 0..(n - bottom) {
        exact.push([
            QuadRational::from_parts(2 * j as i64 + 1, 2, 0, 1),
            QuadRational::from_parts(0, 1, 1, 2),
        ]);
    }
    Realization::from_exact(name, exact)
}

/// Jitters every point by up to `amplitude` per coordinate and rescales so
/// the minimum pairwise distance is exactly 1. Exact coordinates are dropped.
pub fn perturb(r: &Realization, amplitude: f64, seed: u64) -> Result<Realization> {
    if r.len() < 2 {
        return Err(Error::Parameter(
            "perturbation needs at least two points".into(),
        ));
    }
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::Parameter(format!("bad amplitude {amplitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moved: Vec<[f64; 2]> = r
        .points
        .iter()
        .map(|p| {
            [
                p[0] + rng.gen_range(-amplitude..=amplitude),
                p[1] + rng.gen_range(-amplitude..=amplitude),
            ]
        })
        .collect();
    let mut min_sq = f64::INFINITY;
    for i in 0..moved.len() {
        for j in (i + 1)..moved.len() {
            let dx = moved[i][0] - moved[j][0];
            let dy = moved[i][1] - moved[j][1];
            min_sq = min_sq.min(dx * dx + dy * dy);
        }
    }
    if min_sq == 0.0 {
        return Err(Error::Parameter("perturbation collapsed two points".into()));
    }
    let scale = 1.0 / min_sq.sqrt();
    Ok(Realization::new(
        format!("{}-perturbed-{seed}", r.name),
        moved.iter().map(|p| [p[0] * scale, p[1] * scale]).collect(),
    ))
}
