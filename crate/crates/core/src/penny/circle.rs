use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::TolerancePolicy;

use super::Realization;

// relative size of the weakest QR pivot below which the fit is degenerate
const DEGENERATE_PIVOT: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircumcircleReport {
    pub concyclic: bool,
    pub center: [f64; 2],
    pub radius_sq: f64,
    /// Largest `| ‖p - c‖ - ρ |` over the points.
    pub max_deviation: f64,
    pub note: Option<String>,
}

/// Algebraic least-squares circle fit on centroid-centered, RMS-scaled data.
pub fn circumcircle_classify(
    r: &Realization,
    policy: &TolerancePolicy,
) -> Result<CircumcircleReport> {
    let n = r.len();
    if n < 3 {
        return Err(Error::Precondition(format!(
            "circle fit needs at least 3 points, got {n}"
        )));
    }
    let cx = r.points.iter().map(|p| p[0]).sum::<f64>() / n as f64;
    let cy = r.points.iter().map(|p| p[1]).sum::<f64>() / n as f64;
    let spread = (r
        .points
        .iter()
        .map(|p| (p[0] - cx).powi(2) + (p[1] - cy).powi(2))
        .sum::<f64>()
        / n as f64)
        .sqrt();
    if spread == 0.0 {
        return Err(Error::Precondition("all points coincide".into()));
    }
    let xs: Vec<f64> = r.points.iter().map(|p| (p[0] - cx) / spread).collect();
    let ys: Vec<f64> = r.points.iter().map(|p| (p[1] - cy) / spread).collect();

    // x² + y² + a x + b y + c = 0
    let columns = vec![xs.clone(), ys.clone(), vec![1.0; n]];
    let rhs: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| -(x * x + y * y)).collect();
    let Some([a, b, c]) = least_squares3(columns, rhs) else {
        return Ok(CircumcircleReport {
            concyclic: false,
            center: [f64::NAN, f64::NAN],
            radius_sq: f64::INFINITY,
            max_deviation: f64::INFINITY,
            note: Some("degenerate fit: points are collinear".into()),
        });
    };

    let center_s = [-a / 2.0, -b / 2.0];
    let radius_sq_s = center_s[0] * center_s[0] + center_s[1] * center_s[1] - c;
    let center = [cx + spread * center_s[0], cy + spread * center_s[1]];
    let radius_sq = radius_sq_s * spread * spread;
    let radius = radius_sq.sqrt();
    let max_deviation = r
        .points
        .iter()
        .map(|p| ((p[0] - center[0]).hypot(p[1] - center[1]) - radius).abs())
        .fold(0.0f64, f64::max);
    Ok(CircumcircleReport {
        concyclic: max_deviation <= policy.contact,
        center,
        radius_sq,
        max_deviation,
        note: None,
    })
}

// Modified Gram-Schmidt QR with one reorthogonalization pass.
fn least_squares3(mut cols: Vec<Vec<f64>>, rhs: Vec<f64>) -> Option<[f64; 3]> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let mut r = [[0.0f64; 3]; 3];
    let scale = cols.iter().map(|c| norm(c)).fold(0.0f64, f64::max);
    for k in 0..3 {
        for _pass in 0..2 {
            for j in 0..k {
                let proj = dot(&cols[j], &cols[k]);
                r[j][k] += proj;
                let qj = cols[j].clone();
                for (x, q) in cols[k].iter_mut().zip(&qj) {
                    *x -= proj * q;
                }
            }
        }
        let nk = norm(&cols[k]);
        if nk <= DEGENERATE_PIVOT * scale {
            return None;
        }
        r[k][k] = nk;
        cols[k].iter_mut().for_each(|x| *x /= nk);
    }
    let qtb: Vec<f64> = cols.iter().map(|q| dot(q, &rhs)).collect();
    let mut sol = [0.0; 3];
    for k in (0..3).rev() {
        let tail: f64 = ((k + 1)..3).map(|j| r[k][j] * sol[j]).sum();
        sol[k] = (qtb[k] - tail) / r[k][k];
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::penny::{generate_realization, Family};

    #[test]
    fn regular_pentagon_radius() {
        let r = generate_realization(Family::CyclePolygon, 5).unwrap();
        let rep = circumcircle_classify(&r, &TolerancePolicy::default()).unwrap();
        assert!(rep.concyclic);
        let closed = 1.0 / (2.0 * (1.0 - (2.0 * std::f64::consts::PI / 5.0).cos()));
        assert!((rep.radius_sq - closed).abs() < 1e-12);
        assert!((rep.radius_sq - 0.7236068).abs() < 1e-7);
    }

    #[test]
    fn collinear_is_degenerate() {
        let r = generate_realization(Family::PathCollinear, 5).unwrap();
        let rep = circumcircle_classify(&r, &TolerancePolicy::default()).unwrap();
        assert!(!rep.concyclic);
        assert!(rep.note.unwrap().contains("degenerate"));
    }

    #[test]
    fn unit_square() {
        let r = Realization::new(
            "square",
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        );
        let rep = circumcircle_classify(&r, &TolerancePolicy::default()).unwrap();
        assert!(rep.concyclic);
        assert!((rep.radius_sq - 0.5).abs() < 1e-14);
        assert!((rep.center[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn strip_is_not_concyclic() {
        let r = generate_realization(Family::LatticeStrip, 5).unwrap();
        let rep = circumcircle_classify(&r, &TolerancePolicy::default()).unwrap();
        assert!(!rep.concyclic);
        assert!(rep.max_deviation > 1e-3);
    }

    #[test]
    fn too_few_points() {
        let r = Realization::new("pair", vec![[0.0, 0.0], [1.0, 0.0]]);
        assert!(circumcircle_classify(&r, &TolerancePolicy::default()).is_err());
    }
}
