//! Spectral asymptotics: Weyl counting slope, eigenvalue growth, sup-norms.

use super::Stopwatch;

use super::{Measurement, SpecEcho, StabilityBases, VerificationReport};
use crate::error::{Error, Result};
use crate::spectral::SpectralBasis;
use crate::stats::fit_log_log;
use crate::{growth_exponent, weyl_exponent};

/// Relative tolerance of the slope checks.
pub const SLOPE_TOLERANCE: f64 = 0.10;

/// Fit window `[λ_{J_ok} / 2^octaves, λ_{J_ok}]`; the octaves below it are
/// dropped as pre-asymptotic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeWindow {
    pub octaves: f64,
}

impl Default for SlopeWindow {
    fn default() -> Self {
        Self { octaves: 3.0 }
    }
}

impl SlopeWindow {
    /// 0-based indices of the trusted modes whose eigenvalue is in the window.
    fn indices(&self, basis: &SpectralBasis) -> Vec<usize> {
        let top = basis.max_trusted_eigenvalue();
        let lo = top / 2f64.powf(self.octaves);
        (0..basis.trusted()).filter(|&j| basis.eigenvalues()[j] >= lo).collect()
    }
}

fn slope_report(
    name: &str,
    basis: &SpectralBasis,
    window: SlopeWindow,
    target: f64,
    points: Vec<(f64, f64)>,
    label: &str,
) -> Result<VerificationReport> {
    let (x, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    let fit = fit_log_log(&x, &y)
        .ok_or_else(|| Error::InvalidArgument(format!("{name}: fewer than two distinct points in the fit window")))?;
    let mut r = VerificationReport::new(name, SpecEcho::new(basis.spec(), basis.trusted()));
    r.param_f64("windowOctaves", window.octaves);
    r.measure(Measurement::info("target", target));
    r.measure(Measurement::info("points", fit.points as f64));
    r.measure(Measurement::info("rSquared", fit.r_squared));
    r.measure(Measurement::within(
        "slope",
        fit.slope,
        target,
        SLOPE_TOLERANCE * target,
    ));
    r.series(label, x.iter().zip(&y).map(|(a, b)| (a.ln(), b.ln())).collect());
    Ok(r)
}

/// Slope of `log N(u)` against `log u` at the trusted eigenvalues in the
/// window, against the exponent `n (1/(2k) + 1/(2l))`.
pub fn verify_weyl_slope(basis: &SpectralBasis, window: SlopeWindow) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let spec = basis.spec();
    let mut points = Vec::new();
    for j in window.indices(basis) {
        let u = basis.eigenvalues()[j];
        points.push((u, basis.counting_function(u)? as f64));
    }
    let mut r = slope_report(
        "weyl",
        basis,
        window,
        weyl_exponent(spec.n, spec.k, spec.l),
        points,
        "log u vs log N(u)",
    )?;
    r.runtime = start.elapsed();
    Ok(r)
}

/// Slope of `log λ_j` against `log j`, against `2kl / ((k + l) n)`.
pub fn verify_growth_slope(basis: &SpectralBasis, window: SlopeWindow) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let spec = basis.spec();
    let points = window
        .indices(basis)
        .into_iter()
        .map(|j| ((j + 1) as f64, basis.eigenvalues()[j]))
        .collect();
    let mut r = slope_report(
        "growth",
        basis,
        window,
        growth_exponent(spec.n, spec.k, spec.l),
        points,
        "log j vs log lambda_j",
    )?;
    r.runtime = start.elapsed();
    Ok(r)
}

/// `max_j s_j / λ_j` over the trusted modes must be finite and may grow by at
/// most 5% under grid refinement.
pub fn verify_sup_norm_bound(bases: &StabilityBases) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let ratio = |b: &SpectralBasis| {
        b.trusted_eigenvalues()
            .iter()
            .zip(b.sup_norms())
            .map(|(lam, s)| s / lam)
            .fold(0.0, f64::max)
    };
    let (base, fine) = (ratio(&bases.base), ratio(&bases.refined));
    let mut r = VerificationReport::new("supNorm", bases.echo());
    r.measure(Measurement::finite("maxSupNormOverEigenvalue", base));
    r.measure(Measurement::info("maxSupNormOverEigenvalue.refined", fine));
    r.measure(Measurement::at_most("refinementGrowth", fine / base, 1.05));
    r.series(
        "j vs s_j / lambda_j",
        bases
            .base
            .trusted_eigenvalues()
            .iter()
            .zip(bases.base.sup_norms())
            .enumerate()
            .map(|(j, (lam, s))| ((j + 1) as f64, s / lam))
            .collect(),
    );
    r.runtime = start.elapsed();
    Ok(r)
}
