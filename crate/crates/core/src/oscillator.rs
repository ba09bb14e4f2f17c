//! The continuous problem `A = (-Δ)^l + |x|^{2k} + 1` and its finite-difference
//! discretization on `[-L, L]^n` with Dirichlet boundary conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BandMatrix, DenseMatrix};

/// Default cap on the number of grid points `N^n` for the dense `n = 2` route.
pub const DEFAULT_DENSE_BUDGET: usize = 96 * 96;

/// Second-difference stencil used for `-Δ` in one dimension.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stencil {
    /// `[-1, 2, -1] / h^2`, second order.
    ThreePoint,
    /// `[1/12, -4/3, 5/2, -4/3, 1/12] / h^2`, fourth order. Near the boundary
    /// the stencil is truncated (zero extension), which keeps the matrix
    /// symmetric positive semi-definite.
    #[default]
    FivePoint,
}

impl Stencil {
    /// First column of the symmetric Toeplitz matrix `h^2 · (-Δ_h)`.
    pub fn coefficients(self) -> &'static [f64] {
        match self {
            Stencil::ThreePoint => &[2.0, -1.0],
            Stencil::FivePoint => &[5.0 / 2.0, -4.0 / 3.0, 1.0 / 12.0],
        }
    }

    /// Formal order of accuracy.
    pub fn order(self) -> u32 {
        match self {
            Stencil::ThreePoint => 2,
            Stencil::FivePoint => 4,
        }
    }
}

/// The continuous problem `(n, k, l)` plus discretization controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    /// Spatial dimension, 1 or 2.
    pub n: usize,
    /// Potential half-power: `V(x) = |x|^{2k} + 1`.
    pub k: u32,
    /// Power of the Laplacian.
    pub l: u32,
    /// Half-width `L` of the computational box `[-L, L]^n`.
    pub domain_half_width: f64,
    /// Grid points per axis, endpoints included.
    pub grid_points: usize,
    /// Number of eigenpairs requested.
    pub modes: usize,
    pub stencil: Stencil,
    /// Largest `N^n` accepted by the dense route (`n = 2`).
    pub dense_budget: usize,
}

impl OscillatorSpec {
    /// A one-dimensional spec with the default stencil and budget.
    pub fn new(k: u32, l: u32, domain_half_width: f64, grid_points: usize, modes: usize) -> Self {
        Self {
            n: 1,
            k,
            l,
            domain_half_width,
            grid_points,
            modes,
            stencil: Stencil::default(),
            dense_budget: DEFAULT_DENSE_BUDGET,
        }
    }

    pub fn with_dim(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    /// Box half-width `(4Λ)^{1/(2k)}` that keeps eigenfunctions with
    /// eigenvalue up to `Λ` well inside their classically forbidden region.
    pub fn default_half_width(k: u32, lambda_max: f64) -> f64 {
        (4.0 * lambda_max).powf(1.0 / (2.0 * f64::from(k)))
    }

    /// Largest grid step resolving eigenfunctions up to eigenvalue `Λ` with
    /// about ten points per local wavelength.
    pub fn max_step(l: u32, lambda_max: f64) -> f64 {
        0.1 * lambda_max.powf(-1.0 / (2.0 * f64::from(l)))
    }

    /// Grid spacing `h = 2L / (N - 1)`.
    pub fn step(&self) -> f64 {
        2.0 * self.domain_half_width / (self.grid_points as f64 - 1.0)
    }

    /// Number of interior unknowns per axis.
    pub fn interior_points(&self) -> usize {
        self.grid_points.saturating_sub(2)
    }

    /// Dimension of the assembled matrix, `(N - 2)^n`.
    pub fn matrix_dim(&self) -> usize {
        self.interior_points().pow(self.n as u32)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidSpec(m));
        if !(self.n == 1 || self.n == 2) {
            return fail(format!("dimension n = {} not supported (1 or 2)", self.n));
        }
        if self.k < 1 || self.l < 1 {
            return fail(format!("k = {}, l = {}: both must be at least 1", self.k, self.l));
        }
        if self.grid_points < 16 {
            return fail(format!("grid points N = {} below minimum 16", self.grid_points));
        }
        if !(self.domain_half_width.is_finite() && self.domain_half_width > 0.0) {
            return fail(format!(
                "domain half-width L = {} must be positive",
                self.domain_half_width
            ));
        }
        if self.modes < 1 || self.modes > self.matrix_dim() {
            return fail(format!("modes J = {} outside [1, {}]", self.modes, self.matrix_dim()));
        }
        if self.n == 2 && self.grid_points * self.grid_points > self.dense_budget {
            return Err(Error::DenseBudget {
                points: self.grid_points * self.grid_points,
                budget: self.dense_budget,
            });
        }
        Ok(())
    }

    /// Logs a warning when the grid step is too coarse for eigenvalues up to
    /// `lambda_max`. Returns whether the resolution rule holds.
    pub fn check_resolution(&self, lambda_max: f64) -> bool {
        let h = self.step();
        let hmax = Self::max_step(self.l, lambda_max);
        if h > hmax {
            log::warn!("grid step {h:.3e} exceeds {hmax:.3e} recommended for eigenvalues up to {lambda_max:.3e}");
            false
        } else {
            true
        }
    }

    /// `V(x) = |x|^{2k} + 1`.
    pub fn potential_at(&self, x: &[f64]) -> f64 {
        potential(self.k, x)
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n, self.domain_half_width, self.grid_points)
    }
}

/// `|x|^{2k} + 1`.
pub fn potential(k: u32, x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    r2.powi(k as i32) + 1.0
}

/// Uniform tensor grid on `[-L, L]^n` with composite trapezoidal weights.
///
/// Multi-dimensional samples are stored row-major with the last axis fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    n: usize,
    axis: Vec<f64>,
    axis_weights: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, half_width: f64, points: usize) -> Self {
        let h = 2.0 * half_width / (points as f64 - 1.0);
        // symmetric by construction: the i-th and mirrored points use the same formula
        let axis: Vec<f64> = (0..points)
            .map(|i| {
                let j = points - 1 - i;
                if i == j {
                    0.0
                } else if i < j {
                    -half_width + i as f64 * h
                } else {
                    half_width - j as f64 * h
                }
            })
            .collect();
        let axis_weights: Vec<f64> = (0..points)
            .map(|i| if i == 0 || i == points - 1 { 0.5 * h } else { h })
            .collect();
        let weights = if n == 1 {
            axis_weights.clone()
        } else {
            let mut w = Vec::with_capacity(points.pow(n as u32));
            for a in &axis_weights {
                for b in &axis_weights {
                    w.push(a * b);
                }
            }
            w
        };
        Self {
            n,
            axis,
            axis_weights,
            weights,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Points per axis.
    pub fn points_per_axis(&self) -> usize {
        self.axis.len()
    }

    /// Total number of samples `N^n`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn axis_weights(&self) -> &[f64] {
        &self.axis_weights
    }

    pub fn step(&self) -> f64 {
        self.axis[1] - self.axis[0]
    }

    pub fn half_width(&self) -> f64 {
        self.axis[self.axis.len() - 1]
    }

    /// Quadrature weights for every sample.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Coordinates of sample `i` (second entry unused for `n = 1`).
    pub fn coords(&self, i: usize) -> [f64; 2] {
        let m = self.axis.len();
        if self.n == 1 {
            [self.axis[i], 0.0]
        } else {
            [self.axis[i / m], self.axis[i % m]]
        }
    }

    /// Whether sample `i` lies on the boundary of the box.
    pub fn on_boundary(&self, i: usize) -> bool {
        let m = self.axis.len();
        let edge = |a: usize| a == 0 || a == m - 1;
        if self.n == 1 {
            edge(i)
        } else {
            edge(i / m) || edge(i % m)
        }
    }

    /// Distance, in grid steps, from sample `i` to the nearest boundary face.
    pub fn boundary_distance(&self, i: usize) -> usize {
        let m = self.axis.len();
        let d = |a: usize| a.min(m - 1 - a);
        if self.n == 1 {
            d(i)
        } else {
            d(i / m).min(d(i % m))
        }
    }
}

/// The assembled symmetric matrix: banded for `n = 1`, dense for `n = 2`.
#[derive(Clone, Debug, PartialEq)]
pub enum SymmetricMatrix {
    Band(BandMatrix),
    Dense(DenseMatrix),
}

impl SymmetricMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SymmetricMatrix::Band(m) => m.dim(),
            SymmetricMatrix::Dense(m) => m.dim(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            SymmetricMatrix::Band(m) => m.get(i, j),
            SymmetricMatrix::Dense(m) => m.get(i, j),
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        match self {
            SymmetricMatrix::Band(m) => m.matvec(x, y),
            SymmetricMatrix::Dense(m) => m.matvec(x, y),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        match self {
            SymmetricMatrix::Band(m) => m.norm_inf(),
            SymmetricMatrix::Dense(m) => m.norm_inf(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            SymmetricMatrix::Band(m) => m.to_dense(),
            SymmetricMatrix::Dense(m) => m.clone(),
        }
    }
}

/// One-dimensional `-Δ_h` on the interior points, raised to the power `l`.
fn laplacian_power(m: usize, h: f64, stencil: Stencil, l: u32) -> Vec<BandMatrix> {
    let scale = 1.0 / (h * h);
    let column: Vec<f64> = stencil.coefficients().iter().map(|c| c * scale).collect();
    let d = BandMatrix::toeplitz(m, &column);
    let mut powers = vec![BandMatrix::toeplitz(m, &[1.0]), d.clone()];
    for _ in 2..=l {
        let next = powers.last().unwrap().mul_commuting(&d);
        powers.push(next);
    }
    powers
}

/// Assembles `(-Δ_h)^l + diag(|x_i|^{2k} + 1)` on the interior grid points.
///
/// For `n = 2` the Laplacian is the Kronecker sum `D ⊗ I + I ⊗ D`; its `l`-th
/// power is expanded binomially into Kronecker products of powers of `D`, so
/// every entry is computed by a symmetric formula and the matrix is exactly
/// symmetric.
pub fn assemble_operator(spec: &OscillatorSpec) -> Result<SymmetricMatrix> {
    spec.validate()?;
    let m = spec.interior_points();
    let h = spec.step();
    let grid = spec.grid();
    let axis = &grid.axis()[1..=m];
    let powers = laplacian_power(m, h, spec.stencil, spec.l);

    if spec.n == 1 {
        let mut a = powers[spec.l as usize].clone();
        let diag: Vec<f64> = axis.iter().map(|&x| spec.potential_at(&[x])).collect();
        a.add_diagonal(&diag);
        return Ok(SymmetricMatrix::Band(a));
    }

    let l = spec.l as usize;
    let dim = m * m;
    let mut a = DenseMatrix::zeros(dim);
    let binom = binomials(l);
    for (i, c) in binom.iter().enumerate() {
        let (p, q) = (&powers[i], &powers[l - i]);
        let (bp, bq) = (p.bandwidth(), q.bandwidth());
        for r1 in 0..m {
            for c1 in r1.saturating_sub(bp)..=(r1 + bp).min(m - 1) {
                let a1 = p.get(r1, c1);
                if a1 == 0.0 {
                    continue;
                }
                for r2 in 0..m {
                    for c2 in r2.saturating_sub(bq)..=(r2 + bq).min(m - 1) {
                        let v = c * a1 * q.get(r2, c2);
                        let (row, col) = (r1 * m + r2, c1 * m + c2);
                        a.set(row, col, a.get(row, col) + v);
                    }
                }
            }
        }
    }
    for r1 in 0..m {
        for r2 in 0..m {
            let idx = r1 * m + r2;
            a.set(idx, idx, a.get(idx, idx) + spec.potential_at(&[axis[r1], axis[r2]]));
        }
    }
    Ok(SymmetricMatrix::Dense(a))
}

fn binomials(l: usize) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..l {
        let mut next = vec![1.0; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_values() {
        let s1 = OscillatorSpec::new(1, 1, 5.0, 33, 4);
        assert_eq!(s1.potential_at(&[0.0]), 1.0);
        assert_eq!(potential(2, &[1.0]), 2.0);
        assert_eq!(potential(3, &[2.0]), 65.0);
        assert_eq!(potential(1, &[3.0, 4.0]), 26.0);
    }

    #[test]
    fn grid_is_symmetric_with_trapezoid_weights() {
        let g = Grid::new(1, 3.0, 41);
        let a = g.axis();
        for i in 0..a.len() {
            assert_eq!(a[i], -a[a.len() - 1 - i]);
        }
        assert_eq!(a[0], -3.0);
        let total: f64 = g.weights().iter().sum();
        assert!((total - 6.0).abs() < 1e-13);
        let g2 = Grid::new(2, 3.0, 21);
        let total: f64 = g2.weights().iter().sum();
        assert!((total - 36.0).abs() < 1e-12);
        assert!(g2.on_boundary(5) && !g2.on_boundary(21 + 5));
    }

    #[test]
    fn validation() {
        assert!(OscillatorSpec::new(0, 1, 5.0, 33, 4).validate().is_err());
        assert!(OscillatorSpec::new(1, 0, 5.0, 33, 4).validate().is_err());
        assert!(OscillatorSpec::new(1, 1, 5.0, 15, 4).validate().is_err());
        assert!(OscillatorSpec::new(1, 1, 5.0, 33, 32).validate().is_err());
        assert!(OscillatorSpec::new(1, 1, -1.0, 33, 4).validate().is_err());
        assert!(OscillatorSpec::new(1, 1, 5.0, 33, 31).validate().is_ok());
        let big = OscillatorSpec::new(1, 1, 5.0, 97, 4).with_dim(2);
        assert!(matches!(big.validate(), Err(Error::DenseBudget { .. })));
        assert!(OscillatorSpec::new(1, 1, 5.0, 96, 4).with_dim(2).validate().is_ok());
        assert!(OscillatorSpec::new(1, 1, 5.0, 33, 4).with_dim(3).validate().is_err());
    }

    #[test]
    fn defaults_helpers() {
        assert!((OscillatorSpec::default_half_width(1, 25.0) - 10.0).abs() < 1e-12);
        assert!((OscillatorSpec::max_step(1, 100.0) - 0.01).abs() < 1e-15);
        let coarse = OscillatorSpec::new(1, 1, 10.0, 1001, 4);
        assert!(!coarse.check_resolution(100.0));
        assert!(coarse.check_resolution(1.0));
    }
}
