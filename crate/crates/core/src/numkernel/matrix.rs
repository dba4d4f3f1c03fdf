use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Thresholds governing every numerical rank, sign and contact decision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Relative zero threshold; the absolute cutoff is `n * max|λ| * rel_zero`.
    pub rel_zero: f64,
    /// Required ratio between the smallest retained and largest discarded magnitude.
    pub min_gap_ratio: f64,
    /// Contact tolerance on squared distances.
    pub contact: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            rel_zero: 1e-12,
            min_gap_ratio: 1e3,
            contact: 1e-9,
        }
    }
}

impl TolerancePolicy {
    pub fn new(rel_zero: f64, min_gap_ratio: f64, contact: f64) -> Result<Self> {
        let policy = TolerancePolicy {
            rel_zero,
            min_gap_ratio,
            contact,
        };
        policy.validate()?;
        Ok(policy)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_zero > 0.0 && self.rel_zero.is_finite()) {
            return Err(Error::Policy(format!(
                "rel_zero must be positive, got {}",
                self.rel_zero
            )));
        }
        if self.min_gap_ratio.is_nan() || self.min_gap_ratio <= 1.0 {
            return Err(Error::Policy(format!(
                "min_gap_ratio must exceed 1, got {}",
                self.min_gap_ratio
            )));
        }
        if !(self.contact > 0.0 && self.contact.is_finite()) {
            return Err(Error::Policy(format!(
                "contact must be positive, got {}",
                self.contact
            )));
        }
        Ok(())
    }

    /// Absolute zero cutoff for a spectrum of order `n` with largest magnitude `max_abs`.
    pub fn zero_threshold(&self, n: usize, max_abs: f64) -> f64 {
        n as f64 * max_abs * self.rel_zero
    }
}

/// Dense symmetric matrix stored row-major. Symmetry is exact.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// The all-ones matrix `E`.
    pub fn ones(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![1.0; n * n],
        }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the upper triangle and mirrored.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    /// Builds a matrix from rows, requiring exact symmetry and finite entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("matrix order must be at least 1".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        let m = SymMatrix { n, data };
        for i in 0..n {
            for j in 0..n {
                if !m.get(i, j).is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric { i, j });
                }
            }
        }
        Ok(m)
    }

    /// Symmetrizes an arbitrary square row-major buffer as `(A + Aᵀ)/2`.
    pub fn symmetrized(n: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), n * n);
        Self::from_fn(n, |i, j| 0.5 * (data[i * n + j] + data[j * n + i]))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Column `j`; equal to row `j` by symmetry.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.row(j).to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &SymMatrix, beta: f64) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }

    pub fn principal_submatrix(&self, indices: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>10.4}")).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
