//! Dense symmetric matrices used as the reference representation for
//! Laplacians and for materialized communication matrices in tests.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{Error, Result};

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Square symmetric matrix stored row-major.
///
/// Every mutator writes both `(i, j)` and `(j, i)`, so symmetry holds
/// bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    order: usize,
    entries: Vec<f64>,
}

/// Eigenvalues in ascending order with matching unit eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[c]` is the eigenvector for `values[c]`.
    pub vectors: Vec<Vec<f64>>,
}

impl DenseSymMatrix {
    pub fn zeros(order: usize) -> Self {
        Self { order, entries: vec![0.0; order * order] }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Builds a matrix from rows, rejecting ragged or non-symmetric input.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        let mut m = Self::zeros(order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::DimensionMismatch { expected: order, found: row.len() });
            }
            for (j, &v) in row.iter().enumerate() {
                if rows[j][i] != v {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                m.entries[i * order + j] = v;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    /// Sets entry `(i, j)` and its mirror.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.order + j] = value;
        self.entries[j * self.order + i] = value;
    }

    /// Adds `value` to `(i, j)` and, when off-diagonal, to `(j, i)`.
    #[inline]
    pub fn add_sym(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.order + j] += value;
        if i != j {
            self.entries[j * self.order + i] += value;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: x.len() });
        }
        Ok((0..self.order)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { order: self.order, entries: self.entries.iter().map(|v| v * factor).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.order != self.order {
            return Err(Error::DimensionMismatch { expected: self.order, found: other.order });
        }
        Ok(Self {
            order: self.order,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    /// Kronecker product `self ⊗ other`. The product of two symmetric
    /// matrices is symmetric.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (self.order, other.order);
        let mut out = Self::zeros(p * q);
        for i in 0..p {
            for j in 0..p {
                let a = self.get(i, j);
                if a == 0.0 {
                    continue;
                }
                for r in 0..q {
                    for s in 0..q {
                        out.entries[(i * q + r) * p * q + j * q + s] = a * other.get(r, s);
                    }
                }
            }
        }
        out
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Option<f64> {
        if self.order != other.order {
            return None;
        }
        Some(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| libm::fabs(a - b))
                .fold(0.0, f64::max),
        )
    }

    /// Row sums; zero for every Laplacian.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.order).map(|i| self.row(i).iter().sum()).collect()
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.order, self.order, &self.entries)
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        if self.order == 0 {
            return Ok(Vec::new());
        }
        let eig = SymmetricEigen::try_new(self.to_nalgebra(), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::Numeric(format!("eigensolver did not converge (order {})", self.order)))?;
        let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Full eigendecomposition, ascending eigenvalues.
    pub fn eigen(&self) -> Result<EigenDecomposition> {
        let eig = SymmetricEigen::try_new(self.to_nalgebra(), EIGEN_EPS, EIGEN_MAX_ITER)
            .ok_or_else(|| Error::Numeric(format!("eigensolver did not converge (order {})", self.order)))?;
        let mut idx: Vec<usize> = (0..self.order).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        Ok(EigenDecomposition {
            values: idx.iter().map(|&c| eig.eigenvalues[c]).collect(),
            vectors: idx.iter().map(|&c| eig.eigenvectors.column(c).iter().copied().collect()).collect(),
        })
    }
}
