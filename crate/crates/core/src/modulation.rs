//! Short-time Fourier transform, modulation-space norms, the nuclearity sums
//! and the trace formula (one spatial dimension).
//!
//! `V_g f(x, ξ) = ∫ f(y) g(y - x) e^{-i y ξ} dy` with the Gaussian window
//! `g(x) = 2^{1/4} e^{-π x²}`. With the `e^{-iyξ}` kernel, the orthogonality
//! relation reads `∬ |V_g f|² dx dξ / (2π) = ‖f‖² ‖g‖²`, so the phase-space
//! cell measure is `Δx Δξ / (2π)`.
//!
//! `‖f‖_{M^{p,q}_w} = ( ∫ ( ∫ |V_g f(x, ξ) w(x, ξ)|^p dx )^{q/p} dξ/(2π) )^{1/q}`
//! (inner `L^p` over `x`, outer `L^q` over `ξ`). The display
//! `( ∫ ( ∫ |V_g f(x, ξ)|^p w(x, ξ)^p dx )^{p/q} dξ )^{1/p}` also appears in
//! the literature; its exponents are inconsistent with that convention and
//! it is not used.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::conjugate_exponent;
use crate::error::{Error, Result};
use crate::fourier::GridFunction;
use crate::spectral::SpectralBasis;
use crate::stats::fit_log_log;

/// Window support half-width; `g(3.5) ≈ 2e-17`.
pub const WINDOW_HALF_WIDTH: f64 = 3.5;
/// Spatial subsampling factor of the STFT nodes relative to the basis grid.
pub const SUBSAMPLE: usize = 4;

/// `2^{1/4} e^{-π x²}`, unit `L²` norm.
pub fn window(x: f64) -> f64 {
    2f64.powf(0.25) * (-PI * x * x).exp()
}

/// Polynomial weight `v_s(x, ξ) = (1 + x² + ξ²)^{s/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightSpec {
    pub s: f64,
}

impl WeightSpec {
    pub fn new(s: f64) -> Self {
        Self { s }
    }

    pub fn eval(&self, x: f64, xi: f64) -> f64 {
        if self.s == 0.0 {
            1.0
        } else {
            (1.0 + x * x + xi * xi).powf(self.s / 2.0)
        }
    }

    /// The reciprocal weight `1 / v_s = v_{-s}`.
    pub fn inverse(&self) -> Self {
        Self { s: -self.s }
    }
}

/// Phase-space sampling nodes tied to a basis grid.
///
/// `x_m` runs over every `SUBSAMPLE`-th basis grid point, extended past
/// `±L` by the window support. `ξ_r = -π/h + r Δξ` with `Δξ = 2π / (h R)`
/// covers one full period of frequencies resolvable on the basis grid, so
/// each row of the transform is an `R`-point DFT. `R` is the shift count
/// rounded up to even.
#[derive(Clone, Debug)]
pub struct StftGrid {
    basis: Arc<SpectralBasis>,
    /// Basis-grid index offset of `x_0` (may be negative) in units of `h`.
    x_start: i64,
    x: Vec<f64>,
    xi: Vec<f64>,
    dx: f64,
    dxi: f64,
}

impl StftGrid {
    /// Nodes for `basis`; errors with `Unsupported` for `n = 2`.
    pub fn for_basis(basis: &Arc<SpectralBasis>) -> Result<Self> {
        let grid = basis.grid();
        if grid.dim() != 1 {
            return Err(Error::Unsupported(
                "short-time Fourier transform is implemented for n = 1".into(),
            ));
        }
        let h = grid.step();
        let npts = grid.points_per_axis() as i64;
        let sub = SUBSAMPLE as i64;
        let ext = (WINDOW_HALF_WIDTH / (sub as f64 * h)).ceil() as i64 * sub;
        let x_start = -ext;
        let x_end = (npts - 1) / sub * sub + ext;
        let count = ((x_end - x_start) / sub + 1) as usize;
        let x: Vec<f64> = (0..count)
            .map(|m| grid.axis()[0] + (x_start + m as i64 * sub) as f64 * h)
            .collect();
        // Rounded up to even so that ξ = 0 is a node.
        let r = count + count % 2;
        let dxi = 2.0 * PI / (h * r as f64);
        let xi = (0..r)
            .map(|k| 2.0 * PI * (k as f64 - (r / 2) as f64) / (r as f64 * h))
            .collect();
        Ok(Self {
            basis: basis.clone(),
            x_start,
            x,
            xi,
            dx: sub as f64 * h,
            dxi,
        })
    }

    pub fn shifts(&self) -> &[f64] {
        &self.x
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.xi
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dxi(&self) -> f64 {
        self.dxi
    }

    /// Phase-space cell measure `Δx Δξ / (2π)`.
    pub fn cell_measure(&self) -> f64 {
        self.dx * self.dxi / (2.0 * PI)
    }

    /// `‖g‖` by trapezoidal quadrature on the basis grid step, centered at 0.
    pub fn window_norm(&self) -> f64 {
        let h = self.basis.grid().step();
        let half = (WINDOW_HALF_WIDTH / h).ceil() as i64;
        let s: f64 = (-half..=half).map(|i| window(i as f64 * h).powi(2) * h).sum();
        s.sqrt()
    }
}

/// Sampled `V_g f(x_m, ξ_r)`, stored row-major by shift.
#[derive(Clone, Debug)]
pub struct Stft {
    shifts: usize,
    freqs: usize,
    values: Vec<Complex64>,
}

impl Stft {
    pub fn get(&self, m: usize, r: usize) -> Complex64 {
        self.values[m * self.freqs + r]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.shifts, self.freqs)
    }
}

/// Quadrature of `∫ f(y) g(y - x_m) e^{-i y ξ_r} dy` at every node.
pub fn stft(f: &GridFunction, grid: &StftGrid) -> Result<Stft> {
    if f.basis().fingerprint() != grid.basis.fingerprint() {
        return Err(Error::BasisMismatch);
    }
    let g = grid.basis.grid();
    let h = g.step();
    let axis = g.axis();
    let w = g.weights();
    let npts = axis.len() as i64;
    let r = grid.xi.len();
    let fv = f.values();
    let reach = (WINDOW_HALF_WIDTH / h).floor() as i64;

    // y_i = (i - c) h with 2c = N - 1, ξ_r = (-π + 2π r / R) / h, so
    // e^{-i y_i ξ_r} = e^{-iπc} e^{2πi c r/R} (-1)^i e^{-2πi i r/R}.
    let two_c = npts - 1;
    let global = Complex64::from_polar(1.0, -PI * ((two_c % 4) as f64) / 2.0);
    let twist: Vec<Complex64> = (0..r as i64)
        .map(|k| {
            let num = (two_c * k).rem_euclid(2 * r as i64);
            global * Complex64::from_polar(1.0, PI * num as f64 / r as f64)
        })
        .collect();
    let fft = FftPlanner::new().plan_fft_forward(r);
    let taps: Vec<f64> = (-reach..=reach).map(|d| window(d as f64 * h)).collect();

    let rows: Vec<Vec<Complex64>> = crate::par::map_range(grid.x.len(), |m| {
        let center = grid.x_start + (m * SUBSAMPLE) as i64;
        let lo = (center - reach).max(0);
        let hi = (center + reach).min(npts - 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); r];
        for i in lo..=hi {
            let iu = i as usize;
            let gi = taps[(i - center + reach) as usize];
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            buf[(i as usize) % r] += fv[iu] * (w[iu] * gi * sign);
        }
        fft.process(&mut buf);
        for (v, t) in buf.iter_mut().zip(&twist) {
            *v *= t;
        }
        buf
    });
    Ok(Stft {
        shifts: grid.x.len(),
        freqs: r,
        values: rows.concat(),
    })
}

/// Mixed norm of a sampled STFT with weight `w`.
pub fn mod_norm_from_stft(v: &Stft, grid: &StftGrid, p: f64, q: f64, w: WeightSpec) -> Result<f64> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "exponents p = {p}, q = {q} must be at least 1"
        )));
    }
    let (ms, rs) = v.shape();
    let dxi = grid.dxi / (2.0 * PI);
    // Row-major accumulation of the inner x-norm for every ξ_r.
    let mut inner = vec![0.0f64; rs];
    for m in 0..ms {
        let row = &v.values[m * rs..(m + 1) * rs];
        let x = grid.x[m];
        for ((acc, z), &xi) in inner.iter_mut().zip(row).zip(&grid.xi) {
            let a = if w.s == 0.0 { z.norm() } else { z.norm() * w.eval(x, xi) };
            if p.is_infinite() {
                *acc = acc.max(a);
            } else if p == 2.0 {
                *acc += a * a;
            } else {
                *acc += a.powf(p);
            }
        }
    }
    if p.is_finite() {
        for acc in &mut inner {
            *acc = (*acc * grid.dx).powf(1.0 / p);
        }
    }
    Ok(if q.is_infinite() {
        inner.into_iter().fold(0.0, f64::max)
    } else {
        (inner.iter().map(|a| a.powf(q)).sum::<f64>() * dxi).powf(1.0 / q)
    })
}

/// `‖f‖_{M^{p,q}_w}`.
pub fn mod_norm(f: &GridFunction, p: f64, q: f64, w: WeightSpec, grid: &StftGrid) -> Result<f64> {
    mod_norm_from_stft(&stft(f, grid)?, grid, p, q, w)
}

/// `Σ_{m,r} |V_g f|² Δx Δξ / (2π)`, which should equal `‖f‖² ‖g‖²`.
pub fn phase_space_energy(v: &Stft, grid: &StftGrid) -> f64 {
    v.values().iter().map(|z| z.norm_sqr()).sum::<f64>() * grid.cell_measure()
}

/// Partial sums of the nuclearity series
/// `S_J = Σ_{j ≤ J} |F(λ_j)|^r (‖u_j‖_{M^{p,q}_w} ‖u_j‖_{M^{p',q'}_{1/w}})^r`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NuclearityResult {
    pub partial_sums: Vec<f64>,
    /// `‖u_j‖_{M^{p,q}_w} ‖u_j‖_{M^{p',q'}_{1/w}}` per mode.
    pub norm_products: Vec<f64>,
    /// `(S_J - S_{J/2}) / S_{J/2}` (0 when both vanish).
    pub tail_ratio: f64,
    /// Whether the tail ratio is below [`NUCLEARITY_TAIL_LIMIT`].
    pub converged: bool,
    /// Fitted exponent of `norm_products` against `λ_j`.
    pub norm_growth_exponent: Option<f64>,
}

/// Tail ratio below which the nuclearity series counts as converged.
pub const NUCLEARITY_TAIL_LIMIT: f64 = 0.5;

/// `‖u_j‖_{M^{p,q}_w} ‖u_j‖_{M^{p',q'}_{1/w}}` with `w = v_s` for the first
/// `min(j_max, J_ok)` modes.
pub fn mode_norm_products(
    basis: &Arc<SpectralBasis>,
    grid: &StftGrid,
    p: f64,
    q: f64,
    s: f64,
    j_max: usize,
) -> Result<Vec<f64>> {
    let jn = j_max.min(basis.trusted());
    let w = WeightSpec::new(s);
    let (pd, qd) = (conjugate_exponent(p), conjugate_exponent(q));
    (0..jn)
        .map(|j| {
            let v = stft(&GridFunction::mode(basis.clone(), j), grid)?;
            Ok(mod_norm_from_stft(&v, grid, p, q, w)? * mod_norm_from_stft(&v, grid, pd, qd, w.inverse())?)
        })
        .collect()
}

/// Nuclearity partial sums from precomputed [`mode_norm_products`].
pub fn nuclearity_sums(
    big_f: impl Fn(f64) -> f64,
    r: f64,
    eigenvalues: &[f64],
    products: &[f64],
) -> Result<NuclearityResult> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "nuclearity order r = {r} must be positive"
        )));
    }
    let jn = products.len().min(eigenvalues.len());
    if jn == 0 {
        return Err(Error::InvalidArgument("need at least one mode".into()));
    }
    let lams = &eigenvalues[..jn];
    let products = &products[..jn];
    let mut partial_sums = Vec::with_capacity(jn);
    let mut acc = 0.0;
    for j in 0..jn {
        acc += big_f(lams[j]).abs().powf(r) * products[j].powf(r);
        partial_sums.push(acc);
    }
    let full = partial_sums[jn - 1];
    let half = partial_sums[(jn / 2).max(1) - 1];
    let tail_ratio = if full == half { 0.0 } else { (full - half) / half };
    let norm_growth_exponent = if jn >= 4 {
        fit_log_log(&lams[jn / 2..], &products[jn / 2..]).map(|f| f.slope)
    } else {
        None
    };
    Ok(NuclearityResult {
        partial_sums,
        norm_products: products.to_vec(),
        tail_ratio,
        converged: tail_ratio < NUCLEARITY_TAIL_LIMIT,
        norm_growth_exponent,
    })
}

/// Partial sums `S_J` for `J ≤ min(j_max, J_ok)`.
#[allow(clippy::too_many_arguments)]
pub fn nuclearity_condition(
    big_f: impl Fn(f64) -> f64,
    r: f64,
    p: f64,
    q: f64,
    s: f64,
    basis: &Arc<SpectralBasis>,
    grid: &StftGrid,
    j_max: usize,
) -> Result<NuclearityResult> {
    let products = mode_norm_products(basis, grid, p, q, s, j_max)?;
    nuclearity_sums(big_f, r, basis.trusted_eigenvalues(), &products)
}

/// The two sides of the trace formula for `F(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceCheck {
    /// `Σ_{j ≤ J_ok} F(λ_j)`.
    pub spectral_sum: f64,
    /// `Σ_i w_i k(x_i, x_i)` with `k(x, y) = Σ_j F(λ_j) u_j(x) ū_j(y)`.
    pub kernel_trace: f64,
}

pub fn trace_formula_check(big_f: impl Fn(f64) -> f64, basis: &SpectralBasis) -> TraceCheck {
    let lams = basis.trusted_eigenvalues();
    let fs: Vec<f64> = lams.iter().map(|&l| big_f(l)).collect();
    let spectral_sum = fs.iter().sum();
    let w = basis.grid().weights();
    let kernel_trace = (0..w.len())
        .map(|i| {
            let diag: f64 = fs
                .iter()
                .enumerate()
                .map(|(j, fj)| fj * basis.eigenfunction(j)[i].powi(2))
                .sum();
            w[i] * diag
        })
        .sum();
    TraceCheck {
        spectral_sum,
        kernel_trace,
    }
}

/// `|⟨u_j, ū_j⟩|` and the Hölder bound
/// `‖u_j‖_{M^{p,q}_w} ‖u_j‖_{M^{p',q'}_{1/w}}` on it.
pub fn duality_check(
    basis: &Arc<SpectralBasis>,
    grid: &StftGrid,
    j: usize,
    p: f64,
    q: f64,
    s: f64,
) -> Result<(f64, f64)> {
    let f = GridFunction::mode(basis.clone(), j);
    let pairing: f64 = f
        .values()
        .iter()
        .zip(basis.grid().weights())
        .map(|(v, w)| (v * v).re * w)
        .sum();
    let v = stft(&f, grid)?;
    let w = WeightSpec::new(s);
    let bound = mod_norm_from_stft(&v, grid, p, q, w)?
        * mod_norm_from_stft(&v, grid, conjugate_exponent(p), conjugate_exponent(q), w.inverse())?;
    Ok((pairing.abs(), bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        let w = WeightSpec::new(2.0);
        assert_eq!(w.eval(1.0, 1.0), 3.0);
        assert!((w.eval(0.3, -2.0) * w.inverse().eval(0.3, -2.0) - 1.0).abs() < 1e-15);
        assert_eq!(WeightSpec::new(0.0).eval(5.0, 5.0), 1.0);
        assert!(WeightSpec::new(1.0).eval(0.0, 0.0) >= 1.0);
    }

    #[test]
    fn window_is_normalized() {
        let h = 0.01;
        let s: f64 = (-400..=400).map(|i| window(i as f64 * h).powi(2) * h).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
}
