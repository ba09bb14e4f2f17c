//! Plancherel, Hausdorff–Young, Paley and Hausdorff–Young–Paley checks.

use super::Stopwatch;
use std::sync::Arc;

use super::{Measurement, StabilityBases, VerificationReport};
use crate::error::{Error, Result};
use crate::fourier::{
    forward, inverse, lp_norm, plancherel_check, random_band_limited, random_band_limited_coefficients,
    weighted_seq_norm, CoefficientVector,
};
use crate::multiplier::paley_constant;
use crate::spectral::SpectralBasis;
use crate::{conjugate_exponent, recip};

/// A positive weight sequence `φ(j)` given as a function of the 0-based mode
/// index and its eigenvalue.
pub struct Phi {
    pub label: String,
    f: Box<dyn Fn(usize, f64) -> f64 + Send + Sync>,
}

impl Phi {
    pub fn new(label: impl Into<String>, f: impl Fn(usize, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            f: Box::new(f),
        }
    }

    /// `φ(j) = 1 / λ_j`.
    pub fn inverse_eigenvalue() -> Self {
        Self::new("1/lambda_j", |_, lam| 1.0 / lam)
    }

    /// `φ(j)` over the trusted modes.
    pub fn values(&self, basis: &SpectralBasis) -> Vec<f64> {
        basis
            .trusted_eigenvalues()
            .iter()
            .enumerate()
            .map(|(j, &lam)| (self.f)(j, lam))
            .collect()
    }
}

impl std::fmt::Debug for Phi {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Phi").field("label", &self.label).finish()
    }
}

/// Plancherel identity and transform round trip over `trials` seeded pairs of
/// band-limited functions. Both are asserted at `1e-10`.
pub fn verify_plancherel(basis: &Arc<SpectralBasis>, trials: usize, seed: u64) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let rows: Vec<Result<(f64, f64)>> = crate::par::map_range(trials, |i| {
        let c = random_band_limited_coefficients(basis, seed, 2 * i as u64);
        let f = inverse(&c);
        let g = random_band_limited(basis, seed, 2 * i as u64 + 1);
        let (lhs, rhs) = plancherel_check(&f, &g)?;
        let scale = lp_norm(&f, 2.0)? * lp_norm(&g, 2.0)?;
        let back = forward(&f);
        let round = c
            .entries()
            .iter()
            .zip(back.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        Ok(((lhs - rhs).norm() / scale, round))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let plancherel = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let round = rows.iter().map(|r| r.1).fold(0.0, f64::max);

    let mut r = VerificationReport::new("plancherel", super::SpecEcho::new(basis.spec(), basis.trusted()));
    r.seed = Some(seed);
    r.param("trials", trials);
    r.measure(Measurement::at_most("plancherelRelativeError", plancherel, 1e-10));
    r.measure(Measurement::at_most("roundTripError", round, 1e-10));
    r.runtime = start.elapsed();
    Ok(r)
}

/// `‖forward f‖_{ℓ^{p'}(A)} / ‖f‖_p ≤ 1 + 1e-6` for each `p`, over `trials`
/// seeded band-limited `f`.
pub fn verify_hausdorff_young(
    basis: &Arc<SpectralBasis>,
    exponents: &[f64],
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let mut r = VerificationReport::new("hausdorffYoung", super::SpecEcho::new(basis.spec(), basis.trusted()));
    r.seed = Some(seed);
    r.param("trials", trials);
    r.param("p", exponents.to_vec());
    for &p in exponents {
        if !(1.0..=2.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "Hausdorff-Young needs 1 <= p <= 2, got {p}"
            )));
        }
        let pd = conjugate_exponent(p);
        let ratios: Vec<Result<f64>> = crate::par::map_range(trials, |i| {
            let f = random_band_limited(basis, seed, i as u64);
            Ok(weighted_seq_norm(&forward(&f), pd)? / lp_norm(&f, p)?)
        });
        let max = ratios
            .into_iter()
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        r.measure(Measurement::at_most(format!("maxRatio[p={p}]"), max, 1.0 + 1e-6));
    }
    r.runtime = start.elapsed();
    Ok(r)
}

/// Ratios for `trials` seeded band-limited probes followed by one
/// single-mode probe `u_j` per trusted mode.
fn probe_ratios(
    basis: &Arc<SpectralBasis>,
    trials: usize,
    seed: u64,
    ratio: impl Fn(&CoefficientVector) -> Result<f64> + Sync,
) -> Result<Vec<f64>> {
    let j_ok = basis.trusted();
    let ratios: Vec<Result<f64>> = crate::par::map_range(trials + j_ok, |i| {
        let c = if i < trials {
            random_band_limited_coefficients(basis, seed, i as u64)
        } else {
            CoefficientVector::unit(basis.clone(), i - trials)
        };
        ratio(&c)
    });
    ratios.into_iter().collect()
}

/// Paley ratios `[Σ |â|^p s^{2-p} φ^{2-p}]^{1/p} / (M_φ^{(2-p)/p} ‖f‖_p)`
/// over the probes of [`probe_ratios`].
pub fn paley_ratios(basis: &Arc<SpectralBasis>, p: f64, phi: &Phi, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let phis = phi.values(basis);
    let m = paley_constant(basis, &phis)?;
    let s = basis.sup_norms();
    probe_ratios(basis, trials, seed, |c| {
        let lhs: f64 = c
            .entries()
            .iter()
            .enumerate()
            .map(|(j, a)| a.norm().powf(p) * s[j].powf(2.0 - p) * phis[j].powf(2.0 - p))
            .sum::<f64>()
            .powf(1.0 / p);
        Ok(lhs / (m.powf((2.0 - p) / p) * lp_norm(&inverse(c), p)?))
    })
}

/// Hausdorff–Young–Paley ratios
/// `[Σ (|â| φ^{1/b - 1/p'})^b s^{2-b}]^{1/b} / (M_φ^{1/b - 1/p'} ‖f‖_p)`
/// over the probes of [`probe_ratios`].
pub fn hyp_ratios(basis: &Arc<SpectralBasis>, p: f64, b: f64, phi: &Phi, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let pd = conjugate_exponent(p);
    if !(p > 1.0 && p <= 2.0 && b >= p && b <= pd) {
        return Err(Error::InvalidArgument(format!(
            "HYP needs 1 < p <= 2 and p <= b <= p', got p = {p}, b = {b}"
        )));
    }
    let phis = phi.values(basis);
    let m = paley_constant(basis, &phis)?;
    let s = basis.sup_norms();
    let e = recip(b) - recip(pd);
    probe_ratios(basis, trials, seed, |c| {
        let lhs: f64 = c
            .entries()
            .iter()
            .enumerate()
            .map(|(j, a)| (a.norm() * phis[j].powf(e)).powf(b) * s[j].powf(2.0 - b))
            .sum::<f64>()
            .powf(1.0 / b);
        Ok(lhs / (m.powf(e) * lp_norm(&inverse(c), p)?))
    })
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Paley-type inequality: records `R_max` on the base, refined and
/// half-truncated bases and requires stability. For `p = 2` the constant is
/// exactly 1 and `R_max ≤ 1` is asserted as well.
pub fn verify_paley(bases: &StabilityBases, p: f64, phi: &Phi, trials: usize, seed: u64) -> Result<VerificationReport> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "Paley inequality needs 1 < p <= 2, got {p}"
        )));
    }
    let start = Stopwatch::start();
    let mut r = VerificationReport::new("paley", bases.echo());
    r.seed = Some(seed);
    r.param_f64("p", p)
        .param("phi", phi.label.clone())
        .param("trials", trials);
    let mut maxima = [0.0; 3];
    for (slot, basis) in maxima.iter_mut().zip(bases.all()) {
        *slot = max_of(&paley_ratios(basis, p, phi, trials, seed)?);
    }
    bases.record(&mut r, "ratioMax", maxima);
    if p == 2.0 {
        r.measure(Measurement::at_most("ratioMax.plancherelBound", maxima[0], 1.0 + 1e-10));
    }
    r.runtime = start.elapsed();
    Ok(r)
}

/// Hausdorff–Young–Paley inequality with interpolation exponent `b`. At the
/// endpoint `b = p'` it reduces to Hausdorff–Young and `R_max ≤ 1 + 1e-6` is
/// asserted.
pub fn verify_hyp(
    bases: &StabilityBases,
    p: f64,
    b: f64,
    phi: &Phi,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let mut r = VerificationReport::new("hyp", bases.echo());
    r.seed = Some(seed);
    r.param_f64("p", p)
        .param_f64("b", b)
        .param("phi", phi.label.clone())
        .param("trials", trials);
    let mut maxima = [0.0; 3];
    for (slot, basis) in maxima.iter_mut().zip(bases.all()) {
        *slot = max_of(&hyp_ratios(basis, p, b, phi, trials, seed)?);
    }
    bases.record(&mut r, "ratioMax", maxima);
    let pd = conjugate_exponent(p);
    if b == pd {
        r.note("b = p': the phi exponent vanishes and the inequality is Hausdorff-Young");
        r.measure(Measurement::at_most(
            "ratioMax.hausdorffYoungBound",
            maxima[0],
            1.0 + 1e-6,
        ));
    } else if b == p {
        r.note("b = p: the inequality is the Paley-type inequality");
    }
    r.runtime = start.elapsed();
    Ok(r)
}
