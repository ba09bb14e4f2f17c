//! The eigenfunction-expansion Fourier transform `f ↦ (∫ f ū_j)_j`, its
//! inverse, quadrature `L^p` norms and the weighted `ℓ^p` sequence norms
//! `(Σ_j |â(j)|^p ‖u_j‖_∞^{2-p})^{1/p}`.
//!
//! Transforms act on the trusted modes `j < J_ok` only.

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;

/// Complex samples of a function on the basis grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    basis: Arc<SpectralBasis>,
    values: Vec<Complex64>,
}

/// Expansion coefficients `â(j)` over the trusted modes.
#[derive(Clone, Debug)]
pub struct CoefficientVector {
    basis: Arc<SpectralBasis>,
    entries: Vec<Complex64>,
}

fn check_same(a: &SpectralBasis, b: &SpectralBasis) -> Result<()> {
    if a.fingerprint() == b.fingerprint() {
        Ok(())
    } else {
        Err(Error::BasisMismatch)
    }
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    if values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument("non-finite entry".into()))
    }
}

impl GridFunction {
    pub fn new(basis: Arc<SpectralBasis>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != basis.grid().len() {
            return Err(Error::InvalidArgument(format!(
                "{} samples for a grid of {}",
                values.len(),
                basis.grid().len()
            )));
        }
        check_finite(&values)?;
        Ok(Self { basis, values })
    }

    pub fn from_real(basis: Arc<SpectralBasis>, values: &[f64]) -> Result<Self> {
        Self::new(basis, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f(x_i)` of a function of position (`x[1]` is 0 for `n = 1`).
    pub fn from_fn(basis: Arc<SpectralBasis>, f: impl Fn([f64; 2]) -> Complex64) -> Result<Self> {
        let grid = basis.grid();
        let values = (0..grid.len()).map(|i| f(grid.coords(i))).collect();
        Self::new(basis, values)
    }

    pub fn zeros(basis: Arc<SpectralBasis>) -> Self {
        let len = basis.grid().len();
        Self {
            basis,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// The eigenfunction `u_j` (0-based `j`).
    pub fn mode(basis: Arc<SpectralBasis>, j: usize) -> Self {
        let values = basis.eigenfunction(j).iter().map(|&v| Complex64::new(v, 0.0)).collect();
        Self { basis, values }
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            basis: self.basis.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: Complex64, other: &Self) -> Result<Self> {
        check_same(&self.basis, &other.basis)?;
        Ok(Self {
            basis: self.basis.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + c * b).collect(),
        })
    }
}

impl CoefficientVector {
    pub fn new(basis: Arc<SpectralBasis>, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != basis.trusted() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for {} trusted modes",
                entries.len(),
                basis.trusted()
            )));
        }
        check_finite(&entries)?;
        Ok(Self { basis, entries })
    }

    pub fn zeros(basis: Arc<SpectralBasis>) -> Self {
        let len = basis.trusted();
        Self {
            basis,
            entries: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// The unit vector `e_j` (0-based `j`).
    pub fn unit(basis: Arc<SpectralBasis>, j: usize) -> Self {
        let mut v = Self::zeros(basis);
        v.entries[j] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn basis(&self) -> &Arc<SpectralBasis> {
        &self.basis
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    /// Entry-wise product with `sigma` (length `J_ok`).
    pub fn multiplied(&self, sigma: &[Complex64]) -> Result<Self> {
        if sigma.len() != self.entries.len() {
            return Err(Error::InvalidArgument(format!(
                "symbol of length {} for {} coefficients",
                sigma.len(),
                self.entries.len()
            )));
        }
        Ok(Self {
            basis: self.basis.clone(),
            entries: self.entries.iter().zip(sigma).map(|(a, s)| a * s).collect(),
        })
    }

    /// Plain `ℓ²` norm.
    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `â(j) = Σ_i w_i f(x_i) ū_j(x_i)` for every trusted mode.
pub fn forward(f: &GridFunction) -> CoefficientVector {
    let basis = &f.basis;
    let w = basis.grid().weights();
    let wf: Vec<Complex64> = f.values.iter().zip(w).map(|(v, wi)| v * wi).collect();
    let entries = crate::par::map_range(basis.trusted(), |j| {
        wf.iter()
            .zip(basis.eigenfunction(j))
            .fold(Complex64::new(0.0, 0.0), |acc, (a, u)| acc + a * u)
    });
    CoefficientVector {
        basis: basis.clone(),
        entries,
    }
}

/// `f(x_i) = Σ_j â(j) u_j(x_i)`.
pub fn inverse(a: &CoefficientVector) -> GridFunction {
    let basis = &a.basis;
    let mut values = vec![Complex64::new(0.0, 0.0); basis.grid().len()];
    for (j, c) in a.entries.iter().enumerate() {
        if c.re == 0.0 && c.im == 0.0 {
            continue;
        }
        for (v, u) in values.iter_mut().zip(basis.eigenfunction(j)) {
            *v += c * u;
        }
    }
    GridFunction {
        basis: basis.clone(),
        values,
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("exponent {p} below 1")))
    }
}

/// Quadrature `L^p` norm `(Σ_i w_i |f(x_i)|^p)^{1/p}`, or `max_i |f(x_i)|` for `p = ∞`.
pub fn lp_norm(f: &GridFunction, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_norm_values(f.basis.grid().weights(), &f.values, p))
}

pub(crate) fn lp_norm_values(w: &[f64], values: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    // scaled to avoid overflow for large p
    let s: f64 = values
        .iter()
        .zip(w)
        .map(|(v, wi)| wi * (v.norm() / scale).powf(p))
        .sum();
    scale * s.powf(1.0 / p)
}

/// Weighted sequence norm `(Σ_j |â(j)|^p s_j^{2-p})^{1/p}`; for `p = ∞` the
/// norm is `sup_j |â(j)| / s_j`.
pub fn weighted_seq_norm(a: &CoefficientVector, p: f64) -> Result<f64> {
    check_exponent(p)?;
    let s = &a.basis.sup_norms()[..a.entries.len()];
    if p.is_infinite() {
        return Ok(a.entries.iter().zip(s).map(|(c, sj)| c.norm() / sj).fold(0.0, f64::max));
    }
    let sum: f64 = a
        .entries
        .iter()
        .zip(s)
        .map(|(c, sj)| c.norm().powf(p) * sj.powf(2.0 - p))
        .sum();
    Ok(sum.powf(1.0 / p))
}

/// Quadrature inner product `Σ_i w_i f(x_i) ḡ(x_i)`.
pub fn inner_product(f: &GridFunction, g: &GridFunction) -> Result<Complex64> {
    check_same(&f.basis, &g.basis)?;
    let w = f.basis.grid().weights();
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(w)
        .fold(Complex64::new(0.0, 0.0), |acc, ((a, b), wi)| acc + a * b.conj() * wi))
}

/// `(⟨f, g⟩_quad, ⟨forward f, forward g⟩_ℓ²)`.
pub fn plancherel_check(f: &GridFunction, g: &GridFunction) -> Result<(Complex64, Complex64)> {
    let lhs = inner_product(f, g)?;
    let (a, b) = (forward(f), forward(g));
    let rhs = a
        .entries
        .iter()
        .zip(&b.entries)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x * y.conj());
    Ok((lhs, rhs))
}

/// Deterministic generator for probe `stream` under `seed`. Each stream is
/// independent of every other, so trials can run in any order.
pub fn probe_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Coefficients i.i.d. standard complex Gaussian on the lower half of the
/// trusted modes (`j < max(1, J_ok / 2)`), zero above.
pub fn random_band_limited_coefficients(basis: &Arc<SpectralBasis>, seed: u64, stream: u64) -> CoefficientVector {
    let mut rng = probe_rng(seed, stream);
    let active = (basis.trusted() / 2).max(1);
    let mut c = CoefficientVector::zeros(basis.clone());
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for e in c.entries.iter_mut().take(active) {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *e = Complex64::new(re * scale, im * scale);
    }
    c
}

/// A random function in the span of the lower half of the trusted modes.
pub fn random_band_limited(basis: &Arc<SpectralBasis>, seed: u64, stream: u64) -> GridFunction {
    inverse(&random_band_limited_coefficients(basis, seed, stream))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_checks() {
        assert!(check_exponent(0.5).is_err());
        assert!(check_exponent(1.0).is_ok());
        assert!(check_exponent(f64::INFINITY).is_ok());
    }

    #[test]
    fn lp_of_constant() {
        let w = [0.5, 1.0, 1.0, 0.5];
        let v = vec![Complex64::new(2.0, 0.0); 4];
        assert!((lp_norm_values(&w, &v, 1.0) - 6.0).abs() < 1e-15);
        assert!((lp_norm_values(&w, &v, 2.0) - (12.0f64).sqrt()).abs() < 1e-14);
        assert_eq!(lp_norm_values(&w, &v, f64::INFINITY), 2.0);
    }

    #[test]
    fn streams_are_independent() {
        use rand::Rng;
        let a: u64 = probe_rng(1, 0).random();
        let b: u64 = probe_rng(1, 1).random();
        let c: u64 = probe_rng(1, 0).random();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
