//! Symmetric eigensolvers used by [`crate::spectral`].
//!
//! Two routes:
//! - banded: orthogonal reduction to tridiagonal form by Givens bulge chasing,
//!   Sturm-sequence bisection for the lowest eigenvalues, then inverse
//!   iteration on the original band matrix for the eigenvectors;
//! - dense: Householder tridiagonalization followed by implicit QL with
//!   eigenvector accumulation.
//!
//! The banded route is the workhorse for `n = 1`; the dense route handles the
//! Kronecker-sum operator for `n = 2` and serves as an independent check of the
//! banded one on small problems.

mod band;
mod dense;
mod tridiag;

pub use band::{band_lowest_eigenpairs, reduce_to_tridiagonal, BandLu};
pub use dense::dense_eigen;
pub use tridiag::{sturm_count, tridiagonal_lowest_eigenvalues};

/// Symmetric band matrix stored by lower diagonals: `diag(d)[i] = A[i + d][i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bandwidth: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self {
            n,
            bandwidth,
            data: vec![0.0; n * (bandwidth + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        if d > self.bandwidth {
            0.0
        } else {
            self.data[d * self.n + c]
        }
    }

    /// Sets `A[i][j]` and, implicitly, `A[j][i]`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        let d = r - c;
        assert!(d <= self.bandwidth, "entry ({i}, {j}) outside band {}", self.bandwidth);
        self.data[d * self.n + c] = v;
    }

    /// Symmetric Toeplitz band matrix from its first column `[a0, a1, .., ab]`.
    pub fn toeplitz(n: usize, column: &[f64]) -> Self {
        let bw = column.len().saturating_sub(1).min(n.saturating_sub(1));
        let mut m = Self::zeros(n, bw);
        for (d, &v) in column.iter().enumerate().take(bw + 1) {
            for c in 0..n - d {
                m.data[d * n + c] = v;
            }
        }
        m
    }

    /// Product of two symmetric band matrices that commute (e.g. powers of the
    /// same matrix). Only the lower band is computed, so the result is
    /// symmetric by construction.
    pub fn mul_commuting(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let (ba, bb) = (self.bandwidth, other.bandwidth);
        let bw = (ba + bb).min(n.saturating_sub(1));
        let mut out = Self::zeros(n, bw);
        for d in 0..=bw {
            for j in 0..n - d {
                let i = j + d;
                let lo = i.saturating_sub(ba).max(j.saturating_sub(bb));
                let hi = (i + ba).min(j + bb).min(n - 1);
                let mut acc = 0.0;
                for k in lo..=hi {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.data[d * n + j] = acc;
            }
        }
        out
    }

    pub fn add_diagonal(&mut self, diag: &[f64]) {
        assert_eq!(diag.len(), self.n);
        for (a, d) in self.data[..self.n].iter_mut().zip(diag) {
            *a += d;
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        let bw = self.bandwidth;
        for (i, yi) in y.iter_mut().enumerate().take(n) {
            let lo = i.saturating_sub(bw);
            let hi = (i + bw).min(n - 1);
            let mut acc = 0.0;
            for (j, xj) in x.iter().enumerate().take(hi + 1).skip(lo) {
                acc += self.get(i, j) * xj;
            }
            *yi = acc;
        }
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bandwidth);
                let hi = (i + self.bandwidth).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bandwidth);
            let hi = (i + self.bandwidth).min(self.n - 1);
            for j in lo..=hi {
                d.data[i * self.n + j] = self.get(i, j);
            }
        }
        d
    }
}

/// Row-major dense square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let other_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Overwrites the strict upper triangle with the lower one.
    pub fn symmetrize_from_lower(&mut self) {
        for i in 0..self.n {
            for j in 0..i {
                self.data[j * self.n + i] = self.data[i * self.n + j];
            }
        }
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n.max(1))
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
