//! Euclidean distance matrices: construction, the Householder-based EDM
//! test, spherical/nonspherical classification by two independent routes,
//! and the null-space relations between `D` and `M = E - D`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    exact_rank, numeric_rank, rank_of_magnitudes, rectangular_rank, sym_eigen, QuadRational,
    RankDecision, SymMatrix, TolerancePolicy,
};
use crate::penny::Realization;

/// Largest projection residual accepted when comparing null spaces.
pub const SUBSPACE_TOLERANCE: f64 = 1e-9;

/// Squared-distance matrix with zero diagonal and nonnegative entries.
#[derive(Debug, Clone)]
pub struct Edm {
    d: SymMatrix,
    exact: Option<Vec<Vec<QuadRational>>>,
}

impl Edm {
    /// Wraps a candidate matrix after checking the diagonal and signs.
    pub fn from_matrix(d: SymMatrix) -> Result<Self> {
        let n = d.order();
        for i in 0..n {
            if d.get(i, i) != 0.0 {
                return Err(Error::NotAnEdm(format!(
                    "diagonal entry {i} is {} instead of 0",
                    d.get(i, i)
                )));
            }
            for j in (i + 1)..n {
                if d.get(i, j) < 0.0 {
                    return Err(Error::NotAnEdm(format!(
                        "negative squared distance {} at ({i},{j})",
                        d.get(i, j)
                    )));
                }
            }
        }
        Ok(Edm { d, exact: None })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.d
    }

    pub fn order(&self) -> usize {
        self.d.order()
    }

    pub fn exact(&self) -> Option<&[Vec<QuadRational>]> {
        self.exact.as_deref()
    }

    /// Principal submatrix on `indices`, exact data included.
    pub fn restrict(&self, indices: &[usize]) -> Edm {
        Edm {
            d: self.d.principal_submatrix(indices),
            exact: self.exact.as_ref().map(|e| {
                indices
                    .iter()
                    .map(|&i| indices.iter().map(|&j| e[i][j].clone()).collect())
                    .collect()
            }),
        }
    }

    /// Exact rank of `D` when exact entries are available.
    pub fn exact_rank(&self) -> Option<usize> {
        self.exact.as_ref().map(|e| exact_rank(e))
    }

    /// Exact rank of `E - D` when exact entries are available.
    pub fn exact_rank_of_candidate(&self) -> Option<usize> {
        let e = self.exact.as_ref()?;
        let one = QuadRational::one();
        let m: Vec<Vec<QuadRational>> = e
            .iter()
            .map(|row| row.iter().map(|d| &one - d).collect())
            .collect();
        Some(exact_rank(&m))
    }
}

/// `d_ij = ‖pᵢ - pⱼ‖²`, exact when the realization carries exact coordinates.
pub fn edm_from_points(r: &Realization) -> Edm {
    let n = r.len();
    let d = SymMatrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            r.squared_distance(i, j)
        }
    });
    let exact = r.exact.as_ref().map(|_| {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        r.exact_squared_distance(i, j)
                            .expect("exact coordinates present")
                    })
                    .collect()
            })
            .collect()
    });
    Edm { d, exact }
}

/// Householder reflection `H` with `H e/√n = e₁`; its first column is `e/√n`
/// and the remaining columns form `V`.
fn householder(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    let s = 1.0 / (n as f64).sqrt();
    let mut u = vec![s; n];
    u[0] -= 1.0;
    let uu: f64 = u.iter().map(|x| x * x).sum();
    if uu == 0.0 {
        return h;
    }
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] -= 2.0 * u[i] * u[j] / uu;
        }
    }
    h
}

/// `Vᵀ A V` for the Householder basis of `e^⊥`.
pub fn project_complement(a: &SymMatrix) -> SymMatrix {
    let n = a.order();
    if n <= 1 {
        return SymMatrix::zeros(0);
    }
    let h = householder(n);
    // t = A H
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[i * n + j] = (0..n).map(|k| a.get(i, k) * h[k * n + j]).sum();
        }
    }
    let m = n - 1;
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            out[i * m + j] = (0..n).map(|k| h[k * n + i + 1] * t[k * n + j + 1]).sum();
        }
    }
    SymMatrix::symmetrized(m, &out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Embedding {
    /// Embedding dimension `r = rank(VᵀDV)`.
    pub dim: usize,
    /// Smallest eigenvalue of `Vᵀ(-D)V`.
    pub min_eigenvalue: f64,
    pub rank: RankDecision,
}

/// Certifies `Vᵀ(-D)V ⪰ 0` and returns the embedding dimension.
pub fn validate_edm(edm: &Edm, policy: &TolerancePolicy) -> Result<Embedding> {
    let n = edm.order();
    if n == 1 {
        return Ok(Embedding {
            dim: 0,
            min_eigenvalue: 0.0,
            rank: rank_of_magnitudes(&[], 0, policy),
        });
    }
    let b = project_complement(edm.matrix()).combine(-1.0, &SymMatrix::zeros(n - 1), 0.0);
    let eig = sym_eigen(&b)?;
    let rank = numeric_rank(&eig, policy);
    let min_eigenvalue = eig.values()[0];
    if min_eigenvalue < -rank.threshold {
        return Err(Error::NotAnEdm(format!(
            "V^T(-D)V has eigenvalue {min_eigenvalue:e} below -{:e}",
            rank.threshold
        )));
    }
    let rank = rank.require_gap("embedding dimension", policy)?;
    Ok(Embedding {
        dim: rank.rank,
        min_eigenvalue,
        rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdmKind {
    Spherical { radius_sq: f64 },
    Nonspherical,
}

impl EdmKind {
    pub fn is_spherical(&self) -> bool {
        matches!(self, EdmKind::Spherical { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            EdmKind::Spherical { .. } => "spherical",
            EdmKind::Nonspherical => "nonspherical",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdmClassification {
    pub embedding_dim: usize,
    pub rank_d: usize,
    pub kind: EdmKind,
    pub w: Vec<f64>,
    pub e_dot_w: f64,
    /// Zero test cutoff for `eᵀw`.
    pub e_dot_w_tolerance: f64,
    /// Verdict of the `rank(D) ∈ {r+1, r+2}` test; `true` means spherical.
    pub spherical_by_rank: bool,
    /// Verdict of the `eᵀw > 0` vs `eᵀw = 0` test; `true` means spherical.
    pub spherical_by_e_dot_w: bool,
    pub rank_decision: RankDecision,
    pub embedding: Embedding,
    pub solve_residual: f64,
}

impl EdmClassification {
    pub fn radius_sq(&self) -> Option<f64> {
        match self.kind {
            EdmKind::Spherical { radius_sq } => Some(radius_sq),
            EdmKind::Nonspherical => None,
        }
    }
}

/// Classifies a nonzero EDM by its rank and, independently, by `eᵀw` where `Dw = e`.
/// The two verdicts must agree.
pub fn classify(edm: &Edm, policy: &TolerancePolicy) -> Result<EdmClassification> {
    let n = edm.order();
    let d = edm.matrix();
    if d.max_abs() == 0.0 {
        return Err(Error::Precondition(
            "classification needs a nonzero EDM".into(),
        ));
    }
    let embedding = validate_edm(edm, policy)?;
    let r = embedding.dim;
    let eig = sym_eigen(d)?;
    let rank_decision = numeric_rank(&eig, policy).require_gap("rank(D)", policy)?;
    let rank_d = rank_decision.rank;
    let solved = crate::numkernel::solve_e(d, policy)?;
    let e_dot_w = solved.e_dot_w();
    let e_dot_w_tolerance = policy.zero_threshold(n, d.max_abs());

    let spherical_by_rank = if rank_d == r + 1 {
        true
    } else if rank_d == r + 2 {
        false
    } else {
        return Err(Error::Consistency(format!(
            "rank(D) = {rank_d} is neither r+1 nor r+2 for r = {r}"
        )));
    };
    let spherical_by_e_dot_w = if e_dot_w > e_dot_w_tolerance {
        true
    } else if e_dot_w.abs() <= e_dot_w_tolerance {
        false
    } else {
        return Err(Error::ClassificationConflict {
            by_rank: label(spherical_by_rank).into(),
            by_etw: "negative e^T w".into(),
            rank: rank_d,
            embedding_dim: r,
            e_dot_w,
        });
    };
    // r = n - 1 forces sphericity; the rank test already says so
    if spherical_by_rank != spherical_by_e_dot_w {
        return Err(Error::ClassificationConflict {
            by_rank: label(spherical_by_rank).into(),
            by_etw: label(spherical_by_e_dot_w).into(),
            rank: rank_d,
            embedding_dim: r,
            e_dot_w,
        });
    }
    let kind = if spherical_by_rank || r + 1 == n {
        EdmKind::Spherical {
            radius_sq: 1.0 / (2.0 * e_dot_w),
        }
    } else {
        EdmKind::Nonspherical
    };
    Ok(EdmClassification {
        embedding_dim: r,
        rank_d,
        kind,
        w: solved.w,
        e_dot_w,
        e_dot_w_tolerance,
        spherical_by_rank,
        spherical_by_e_dot_w,
        rank_decision,
        embedding,
        solve_residual: solved.residual,
    })
}

fn label(spherical: bool) -> &'static str {
    if spherical {
        "spherical"
    } else {
        "nonspherical"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaCheck {
    pub beta: f64,
    /// Smallest eigenvalue of `βE - D`.
    pub min_eig_at_beta: f64,
    /// Smallest eigenvalue of `β(1 - 10⁻³)E - D`.
    pub min_eig_below: f64,
    pub tolerance: f64,
    pub psd_at_beta: bool,
    pub not_psd_below: bool,
}

impl BetaCheck {
    pub fn passed(&self) -> bool {
        self.psd_at_beta && self.not_psd_below
    }
}

/// `βE - D ⪰ 0` at `β = 2ρ²` and fails slightly below it.
pub fn beta_psd_check(
    edm: &Edm,
    cls: &EdmClassification,
    policy: &TolerancePolicy,
) -> Result<BetaCheck> {
    let radius_sq = cls
        .radius_sq()
        .ok_or_else(|| Error::Precondition("beta check needs a spherical EDM".into()))?;
    let n = edm.order();
    let beta = 2.0 * radius_sq;
    let ones = SymMatrix::ones(n);
    let at = ones.combine(beta, edm.matrix(), -1.0);
    let below = ones.combine(beta * (1.0 - 1e-3), edm.matrix(), -1.0);
    let eig_at = sym_eigen(&at)?;
    let eig_below = sym_eigen(&below)?;
    let tolerance = policy.zero_threshold(n, eig_at.max_abs_value());
    let min_eig_at_beta = eig_at.values()[0];
    let min_eig_below = eig_below.values()[0];
    Ok(BetaCheck {
        beta,
        min_eig_at_beta,
        min_eig_below,
        tolerance,
        psd_at_beta: min_eig_at_beta >= -tolerance,
        not_psd_below: min_eig_below < -tolerance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct NullspaceReport {
    pub dim_null_d: usize,
    pub dim_null_m: usize,
    /// Largest distance from a unit vector of `null(D)` to `null(M)`.
    pub d_in_m_residual: f64,
    /// Largest distance from a unit vector of `null(M)` to `null(D)`.
    pub m_in_d_residual: f64,
    pub d_subset_m: bool,
    pub equal: bool,
}

fn projection_residual(from: &[Vec<f64>], onto: &[Vec<f64>]) -> f64 {
    from.iter()
        .map(|x| {
            let mut rest = x.clone();
            for q in onto {
                let c: f64 = q.iter().zip(x).map(|(a, b)| a * b).sum();
                for (r, qi) in rest.iter_mut().zip(q) {
                    *r -= c * qi;
                }
            }
            rest.iter().map(|v| v * v).sum::<f64>().sqrt()
        })
        .fold(0.0f64, f64::max)
}

/// Null-space bases of `D` and `M = E - D` and their mutual containment.
pub fn nullspace_relation(edm: &Edm, policy: &TolerancePolicy) -> Result<NullspaceReport> {
    let n = edm.order();
    let m = SymMatrix::ones(n).combine(1.0, edm.matrix(), -1.0);
    let eig_d = sym_eigen(edm.matrix())?;
    let eig_m = sym_eigen(&m)?;
    let rank_d = numeric_rank(&eig_d, policy).require_gap("null(D)", policy)?;
    let rank_m = numeric_rank(&eig_m, policy).require_gap("null(M)", policy)?;
    let null_d = eig_d.kernel_basis(rank_d.threshold);
    let null_m = eig_m.kernel_basis(rank_m.threshold);
    let d_in_m_residual = projection_residual(&null_d, &null_m);
    let m_in_d_residual = projection_residual(&null_m, &null_d);
    let d_subset_m = d_in_m_residual <= SUBSPACE_TOLERANCE;
    Ok(NullspaceReport {
        dim_null_d: null_d.len(),
        dim_null_m: null_m.len(),
        d_in_m_residual,
        m_in_d_residual,
        d_subset_m,
        equal: null_d.len() == null_m.len() && d_subset_m && m_in_d_residual <= SUBSPACE_TOLERANCE,
    })
}

/// Whether the listed columns of `D` are linearly independent; exact when possible.
pub fn columns_independent(edm: &Edm, cols: &[usize], policy: &TolerancePolicy) -> Result<bool> {
    let n = edm.order();
    if let Some(&bad) = cols.iter().find(|&&c| c >= n) {
        return Err(Error::Parameter(format!(
            "column {bad} out of range for order {n}"
        )));
    }
    if cols.is_empty() {
        return Ok(true);
    }
    if let Some(exact) = edm.exact() {
        let sub: Vec<Vec<QuadRational>> = (0..n)
            .map(|i| cols.iter().map(|&c| exact[i][c].clone()).collect())
            .collect();
        return Ok(exact_rank(&sub) == cols.len());
    }
    let k = cols.len();
    let mut data = Vec::with_capacity(n * k);
    for i in 0..n {
        for &c in cols {
            data.push(edm.matrix().get(i, c));
        }
    }
    let rank = rectangular_rank(n, k, &data, policy)?.require_gap("column independence", policy)?;
    Ok(rank.rank == k)
}

/// Independence of columns `i, j, k`; requires every off-diagonal entry positive.
pub fn three_columns_independent(
    edm: &Edm,
    i: usize,
    j: usize,
    k: usize,
    policy: &TolerancePolicy,
) -> Result<bool> {
    let n = edm.order();
    if n < 3 {
        return Err(Error::Precondition("three-column test needs n >= 3".into()));
    }
    let d = edm.matrix();
    for a in 0..n {
        for b in (a + 1)..n {
            if d.get(a, b) <= 0.0 {
                return Err(Error::Precondition(format!(
                    "off-diagonal entry ({a},{b}) is not positive"
                )));
            }
        }
    }
    if i == j || j == k || i == k {
        return Err(Error::Parameter("column indices must be distinct".into()));
    }
    columns_independent(edm, &[i, j, k], policy)
}
