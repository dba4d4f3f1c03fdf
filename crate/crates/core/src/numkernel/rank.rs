use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::eigen::{sym_eigen, EigenDecomp};
use super::matrix::{SymMatrix, TolerancePolicy};

const MAX_SVD_SWEEPS: usize = 100;

/// Outcome of a thresholded rank decision with its gap audit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankDecision {
    pub rank: usize,
    /// `(smallest retained |λ|) / (largest discarded |λ|)`; infinite when one side is empty
    /// or the discarded magnitudes are exactly zero.
    pub gap_ratio: f64,
    pub gap_ok: bool,
    /// Absolute cutoff applied.
    pub threshold: f64,
    pub largest_discarded: f64,
    pub smallest_retained: f64,
}

impl RankDecision {
    pub fn nullity(&self, n: usize) -> usize {
        n - self.rank
    }

    /// Turns an ambiguous decision into an error naming `context`.
    pub fn require_gap(self, context: &str, policy: &TolerancePolicy) -> Result<Self> {
        if self.gap_ok {
            Ok(self)
        } else {
            Err(Error::AmbiguousRank {
                context: context.to_string(),
                gap_ratio: self.gap_ratio,
                required: policy.min_gap_ratio,
            })
        }
    }
}

/// Rank of a set of magnitudes with cutoff `scale * max * rel_zero`.
pub fn rank_of_magnitudes(mags: &[f64], scale: usize, policy: &TolerancePolicy) -> RankDecision {
    let max = mags.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let threshold = policy.zero_threshold(scale, max);
    let mut smallest_retained = f64::INFINITY;
    let mut largest_discarded = 0.0f64;
    let mut rank = 0;
    for &m in mags {
        let m = m.abs();
        if max > 0.0 && m > threshold {
            rank += 1;
            smallest_retained = smallest_retained.min(m);
        } else {
            largest_discarded = largest_discarded.max(m);
        }
    }
    let (gap_ratio, gap_ok) = if rank == 0 || rank == mags.len() {
        (f64::INFINITY, true)
    } else {
        let ratio = if largest_discarded == 0.0 {
            f64::INFINITY
        } else {
            smallest_retained / largest_discarded
        };
        (ratio, ratio >= policy.min_gap_ratio)
    };
    RankDecision {
        rank,
        gap_ratio,
        gap_ok,
        threshold,
        largest_discarded,
        smallest_retained,
    }
}

/// Rank of a symmetric matrix from its eigendecomposition.
pub fn numeric_rank(eig: &EigenDecomp, policy: &TolerancePolicy) -> RankDecision {
    rank_of_magnitudes(eig.values(), eig.order(), policy)
}

/// Singular values (descending) of a `rows × cols` row-major matrix via
/// one-sided Jacobi on the columns.
pub fn singular_values(rows: usize, cols: usize, data: &[f64]) -> Result<Vec<f64>> {
    if data.len() != rows * cols {
        return Err(Error::Shape(format!(
            "buffer of {} entries for a {rows}x{cols} matrix",
            data.len()
        )));
    }
    // column-major working copy
    let mut a: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        let mut worst = 0.0f64;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = a[p].iter().map(|x| x * x).sum();
                let beta: f64 = a[q].iter().map(|x| x * x).sum();
                let gamma: f64 = a[p].iter().zip(&a[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 {
                    continue;
                }
                let cosine = gamma.abs() / (alpha * beta).sqrt();
                worst = worst.max(cosine);
                if cosine <= f64::EPSILON {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = a.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let xp = *x;
                    let yq = *y;
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SVD_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: worst,
            });
        }
    }

    let mut sv: Vec<f64> = a
        .iter()
        .map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Rank of a rectangular matrix; cutoff `max(rows, cols) * σ_max * rel_zero`.
pub fn rectangular_rank(
    rows: usize,
    cols: usize,
    data: &[f64],
    policy: &TolerancePolicy,
) -> Result<RankDecision> {
    let sv = singular_values(rows, cols, data)?;
    Ok(rank_of_magnitudes(&sv, rows.max(cols), policy))
}

/// Least-squares solution of `Dw = e` through the eigen pseudoinverse.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveE {
    pub w: Vec<f64>,
    /// `max |(Dw - e)_i|`.
    pub residual: f64,
    pub tolerance: f64,
    pub rank: RankDecision,
}

impl SolveE {
    pub fn e_dot_w(&self) -> f64 {
        self.w.iter().sum()
    }
}

/// Solves `Dw = e` in the least-squares sense and certifies `e ∈ col(D)`.
pub fn solve_e(d: &SymMatrix, policy: &TolerancePolicy) -> Result<SolveE> {
    let eig = sym_eigen(d)?;
    solve_e_with(d, &eig, policy)
}

pub(crate) fn solve_e_with(
    d: &SymMatrix,
    eig: &EigenDecomp,
    policy: &TolerancePolicy,
) -> Result<SolveE> {
    let n = d.order();
    let rank = numeric_rank(eig, policy).require_gap("solve_e", policy)?;
    if rank.rank == 0 {
        return Err(Error::Precondition("Dw = e needs a nonzero matrix".into()));
    }
    let mut w = vec![0.0; n];
    for (k, &lambda) in eig.values().iter().enumerate() {
        if lambda.abs() <= rank.threshold {
            continue;
        }
        let q = eig.vector(k);
        let coeff = q.iter().sum::<f64>() / lambda;
        for (wi, qi) in w.iter_mut().zip(q) {
            *wi += coeff * qi;
        }
    }
    let dw = d.mul_vec(&w);
    let residual = dw.iter().fold(0.0f64, |acc, v| acc.max((v - 1.0).abs()));
    let w_norm = w.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tolerance = 10.0 * n as f64 * policy.rel_zero * (1.0 + d.max_abs() * w_norm);
    if residual > tolerance {
        return Err(Error::ColumnSpace {
            residual,
            tolerance,
        });
    }
    Ok(SolveE {
        w,
        residual,
        tolerance,
        rank,
    })
}
