use crate::error::{Error, Result};

use super::matrix::SymMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in nondecreasing order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomp {
    n: usize,
    values: Vec<f64>,
    // column k stored contiguously at [k*n, (k+1)*n)
    vectors: Vec<f64>,
    sweeps: usize,
}

impl EigenDecomp {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    /// `max |(AQ - QΛ)_ij|`.
    pub fn residual(&self, a: &SymMatrix) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..self.n {
            let q = self.vector(k);
            let aq = a.mul_vec(q);
            for i in 0..self.n {
                worst = worst.max((aq[i] - self.values[k] * q[i]).abs());
            }
        }
        worst
    }

    /// `max |(QᵀQ - I)_ij|`.
    pub fn orthogonality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for a in 0..self.n {
            for b in a..self.n {
                let dot: f64 = self
                    .vector(a)
                    .iter()
                    .zip(self.vector(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// Eigenvectors whose eigenvalue magnitude is at most `threshold`.
    pub fn kernel_basis(&self, threshold: f64) -> Vec<Vec<f64>> {
        (0..self.n)
            .filter(|&k| self.values[k].abs() <= threshold)
            .map(|k| self.vector(k).to_vec())
            .collect()
    }
}

/// Cyclic Jacobi eigendecomposition with a fixed row-by-row sweep order.
pub fn sym_eigen(a: &SymMatrix) -> Result<EigenDecomp> {
    let n = a.order();
    for i in 0..n {
        for j in 0..n {
            if !a.get(i, j).is_finite() {
                return Err(Error::NonFinite { i, j });
            }
        }
    }

    let mut m = a.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let total: f64 = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m, n);
        if off <= f64::EPSILON * total * 0.5 || off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_norm: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[x * n + x].total_cmp(&m[y * n + y]).then(x.cmp(&y)));
    let values = order.iter().map(|&k| m[k * n + k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        // v is row-major; column k holds eigenvector k
        let mut col: Vec<f64> = (0..n).map(|i| v[i * n + k]).collect();
        normalize_sign(&mut col);
        vectors.extend(col);
    }

    Ok(EigenDecomp {
        n,
        values,
        vectors,
        sweeps,
    })
}

fn off_diagonal_norm(m: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[i * n + j] * m[i * n + j];
            }
        }
    }
    s.sqrt()
}

fn rotate(m: &mut [f64], v: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = m[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = m[p * n + p];
    let aqq = m[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        let mkp = m[k * n + p];
        let mkq = m[k * n + q];
        m[k * n + p] = c * mkp - s * mkq;
        m[k * n + q] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[p * n + k];
        let mqk = m[q * n + k];
        m[p * n + k] = c * mpk - s * mqk;
        m[q * n + k] = s * mpk + c * mqk;
    }
    m[p * n + q] = 0.0;
    m[q * n + p] = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = c * vkp - s * vkq;
        v[k * n + q] = s * vkp + c * vkq;
    }
}

// First nonnegligible component positive, so output is canonical.
fn normalize_sign(col: &mut [f64]) {
    let lead = col.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(0.0);
    if lead < 0.0 {
        col.iter_mut().for_each(|x| *x = -*x);
    }
}
