//! Eigenbasis of the discretized operator.
//!
//! Eigenvalues are stored in ascending order and indexed from 0 in the API
//! (index `j` here is mode `j + 1`). Eigenfunctions are grid samples
//! normalized in the trapezoidal inner product, zero on the boundary, with the
//! sign fixed so that the first component of largest magnitude is positive.

mod cache;

pub use cache::{load_basis, read_basis, save_basis, write_basis, CACHE_MAGIC, CACHE_VERSION};

use std::hash::Hasher;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{band_lowest_eigenpairs, dense_eigen};
use crate::oscillator::{assemble_operator, Grid, OscillatorSpec, SymmetricMatrix};

/// Relative residual tolerance `‖M v - λ v‖ ≤ RESIDUAL_REL · λ + RESIDUAL_ABS_ULPS · ε ‖M‖_∞`
/// (for Euclidean-normalized `v`).
pub const RESIDUAL_REL: f64 = 1e-8;
/// Roundoff allowance in the residual test, in units of `ε ‖M‖_∞`.
pub const RESIDUAL_ABS_ULPS: f64 = 64.0;
/// Largest admissible `|u_j|` near the box boundary, relative to `‖u_j‖_∞`.
pub const BOUNDARY_DECAY: f64 = 1e-8;

/// Truncated orthonormal eigenbasis `(λ_j, u_j)` of the discretized operator.
#[derive(Clone, Debug)]
pub struct SpectralBasis {
    spec: OscillatorSpec,
    grid: Grid,
    eigenvalues: Vec<f64>,
    eigenfunctions: Vec<Vec<f64>>,
    sup_norms: Vec<f64>,
    trusted: usize,
    fingerprint: u64,
}

/// Per-mode quality measurements from [`SpectralBasis::solve_with_diagnostics`].
#[derive(Clone, Debug, Serialize)]
pub struct SolveDiagnostics {
    /// `‖M v_j - λ_j v_j‖₂` for the Euclidean-normalized eigenvector.
    pub residuals: Vec<f64>,
    /// Residual tolerance applied to each mode.
    pub residual_tolerances: Vec<f64>,
    /// Largest `|u_j|` in the boundary layer divided by `‖u_j‖_∞`.
    pub boundary_ratios: Vec<f64>,
    /// `V(L) / 2`, the eigenvalue ceiling for trusted modes.
    pub eigenvalue_ceiling: f64,
    pub matrix_norm: f64,
    /// Width in grid points of the boundary layer inspected for decay.
    pub boundary_layer: usize,
    /// Why the trusted prefix stopped where it did.
    pub trust_limit: String,
}

impl SpectralBasis {
    /// Diagonalizes the assembled operator and keeps the lowest `spec.modes`
    /// eigenpairs.
    pub fn solve(spec: &OscillatorSpec) -> Result<Self> {
        Self::solve_with_diagnostics(spec).map(|(b, _)| b)
    }

    pub fn solve_with_diagnostics(spec: &OscillatorSpec) -> Result<(Self, SolveDiagnostics)> {
        let matrix = assemble_operator(spec)?;
        let count = spec.modes;
        let (values, vectors) = match &matrix {
            SymmetricMatrix::Band(a) => band_lowest_eigenpairs(a, count)?,
            SymmetricMatrix::Dense(a) => {
                let (mut vals, mut vecs) = dense_eigen(a)?;
                vals.truncate(count);
                vecs.truncate(count);
                (vals, vecs)
            }
        };

        let norm = matrix.norm_inf();
        let residuals: Vec<f64> = crate::par::map_range(count, |j| {
            let v = &vectors[j];
            let mut mv = vec![0.0; v.len()];
            matrix.matvec(v, &mut mv);
            mv.iter()
                .zip(v)
                .map(|(a, b)| (a - values[j] * b).powi(2))
                .sum::<f64>()
                .sqrt()
        });
        let residual_tolerances: Vec<f64> = values
            .iter()
            .map(|&lam| RESIDUAL_REL * lam.abs() + RESIDUAL_ABS_ULPS * f64::EPSILON * norm)
            .collect();

        let grid = spec.grid();
        let scale = 1.0 / spec.step().powi(spec.n as i32).sqrt();
        let eigenfunctions: Vec<Vec<f64>> = vectors.iter().map(|v| embed(spec, v, scale)).collect();
        let sup_norms: Vec<f64> = eigenfunctions.iter().map(|u| sup_norm(u)).collect();

        let layer = 2usize.max(spec.grid_points.div_ceil(100));
        let boundary_ratios: Vec<f64> = eigenfunctions
            .iter()
            .zip(&sup_norms)
            .map(|(u, &s)| {
                let edge = u
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| grid.boundary_distance(*i) < layer)
                    .map(|(_, v)| v.abs())
                    .fold(0.0, f64::max);
                edge / s
            })
            .collect();

        let edge_point = vec![spec.domain_half_width; 1];
        let ceiling = spec.potential_at(&edge_point) / 2.0;
        let mut trusted = 0;
        let mut trust_limit = format!("all {count} requested modes trusted");
        for j in 0..count {
            let reason = if values[j] > ceiling {
                Some(format!("eigenvalue {:.6e} above V(L)/2 = {ceiling:.6e}", values[j]))
            } else if residuals[j] > residual_tolerances[j] {
                Some(format!(
                    "residual {:.3e} above tolerance {:.3e}",
                    residuals[j], residual_tolerances[j]
                ))
            } else if boundary_ratios[j] > BOUNDARY_DECAY {
                Some(format!(
                    "boundary ratio {:.3e} above {BOUNDARY_DECAY:e}",
                    boundary_ratios[j]
                ))
            } else {
                None
            };
            if let Some(r) = reason {
                trust_limit = format!("mode {}: {r}", j + 1);
                break;
            }
            trusted = j + 1;
        }
        log::debug!("solved {count} modes, {trusted} trusted ({trust_limit})");
        if trusted == 0 {
            return Err(Error::NoTrustedModes(trust_limit));
        }
        if values[0] <= 1.0 {
            return Err(Error::NoConvergence(format!(
                "lowest eigenvalue {} not above 1",
                values[0]
            )));
        }

        let basis = Self::from_parts(spec.clone(), values, eigenfunctions, sup_norms, trusted)?;
        let diagnostics = SolveDiagnostics {
            residuals,
            residual_tolerances,
            boundary_ratios,
            eigenvalue_ceiling: ceiling,
            matrix_norm: norm,
            boundary_layer: layer,
            trust_limit,
        };
        Ok((basis, diagnostics))
    }

    /// Assembles a basis from stored parts, checking shapes.
    pub(crate) fn from_parts(
        spec: OscillatorSpec,
        eigenvalues: Vec<f64>,
        eigenfunctions: Vec<Vec<f64>>,
        sup_norms: Vec<f64>,
        trusted: usize,
    ) -> Result<Self> {
        let grid = spec.grid();
        let j = eigenvalues.len();
        if eigenfunctions.len() != j || sup_norms.len() != j {
            return Err(Error::InvalidArgument("eigenpair arrays differ in length".into()));
        }
        if eigenfunctions.iter().any(|u| u.len() != grid.len()) {
            return Err(Error::InvalidArgument("eigenfunction length differs from grid".into()));
        }
        if trusted == 0 || trusted > j {
            return Err(Error::InvalidArgument(format!(
                "trusted modes {trusted} outside [1, {j}]"
            )));
        }
        let mut basis = Self {
            spec,
            grid,
            eigenvalues,
            eigenfunctions,
            sup_norms,
            trusted,
            fingerprint: 0,
        };
        basis.fingerprint = basis.compute_fingerprint();
        Ok(basis)
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for v in [
            self.spec.n,
            self.spec.k as usize,
            self.spec.l as usize,
            self.spec.grid_points,
            self.trusted,
        ] {
            h.write_usize(v);
        }
        h.write_u64(self.spec.domain_half_width.to_bits());
        for v in &self.eigenvalues {
            h.write_u64(v.to_bits());
        }
        for v in &self.sup_norms {
            h.write_u64(v.to_bits());
        }
        h.finish()
    }

    pub fn spec(&self) -> &OscillatorSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// All computed eigenvalues, ascending (length `J`).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvalues of the trusted modes (length `J_ok`).
    pub fn trusted_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues[..self.trusted]
    }

    /// Samples of eigenfunction `j` (0-based) on the full grid.
    pub fn eigenfunction(&self, j: usize) -> &[f64] {
        &self.eigenfunctions[j]
    }

    pub fn eigenfunctions(&self) -> &[Vec<f64>] {
        &self.eigenfunctions
    }

    /// Grid sup-norms `s_j = max_i |u_j(x_i)|` (length `J`).
    pub fn sup_norms(&self) -> &[f64] {
        &self.sup_norms
    }

    /// Number of computed modes `J`.
    pub fn modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Number of trusted modes `J_ok`.
    pub fn trusted(&self) -> usize {
        self.trusted
    }

    /// Largest trusted eigenvalue `λ_{J_ok}`.
    pub fn max_trusted_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.trusted - 1]
    }

    /// Identity used to detect mixing of objects from different bases.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Copy of this basis with only the first `j` modes trusted.
    pub fn truncated(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.trusted {
            return Err(Error::InvalidArgument(format!(
                "cannot truncate to {j} modes (trusted: {})",
                self.trusted
            )));
        }
        Self::from_parts(
            self.spec.clone(),
            self.eigenvalues.clone(),
            self.eigenfunctions.clone(),
            self.sup_norms.clone(),
            j,
        )
    }

    /// Eigenvalue counting function `N(u) = #{j ≤ J_ok : λ_j ≤ u}`.
    pub fn counting_function(&self, u: f64) -> Result<usize> {
        let max = self.max_trusted_eigenvalue();
        if u > max || u.is_nan() {
            return Err(Error::BeyondTrustedSpectrum { threshold: u, max });
        }
        Ok(self.trusted_eigenvalues().partition_point(|&lam| lam <= u))
    }
}

/// Places the interior vector `v` on the full grid (zero boundary) and scales it.
fn embed(spec: &OscillatorSpec, v: &[f64], scale: f64) -> Vec<f64> {
    let n_pts = spec.grid_points;
    let m = spec.interior_points();
    let mut u = vec![0.0; n_pts.pow(spec.n as u32)];
    if spec.n == 1 {
        for (i, x) in v.iter().enumerate() {
            u[i + 1] = x * scale;
        }
    } else {
        for r in 0..m {
            for c in 0..m {
                u[(r + 1) * n_pts + c + 1] = v[r * m + c] * scale;
            }
        }
    }
    fix_sign(&mut u);
    u
}

/// Flips `u` so that its first component of largest magnitude is positive.
fn fix_sign(u: &mut [f64]) {
    let mut best = 0.0;
    let mut sign = 1.0;
    for &x in u.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        for x in u.iter_mut() {
            *x = -*x;
        }
    }
}

fn sup_norm(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_rule() {
        let mut u = vec![0.1, -0.5, 0.5, 0.2];
        fix_sign(&mut u);
        assert_eq!(u, vec![-0.1, 0.5, -0.5, -0.2]);
    }

    #[test]
    fn harmonic_small() {
        let spec = OscillatorSpec::new(1, 1, 10.0, 1001, 12);
        let (basis, diag) = SpectralBasis::solve_with_diagnostics(&spec).unwrap();
        assert!(basis.trusted() >= 8, "{}", diag.trust_limit);
        for (j, lam) in basis.trusted_eigenvalues().iter().enumerate().take(8) {
            let exact = 2.0 * (j as f64 + 1.0);
            assert!((lam - exact).abs() / exact < 1e-5, "{j}: {lam}");
        }
        let w = basis.grid().weights();
        for a in 0..4 {
            for b in 0..4 {
                let ip: f64 = (0..w.len())
                    .map(|i| w[i] * basis.eigenfunction(a)[i] * basis.eigenfunction(b)[i])
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-10);
            }
        }
    }
}
