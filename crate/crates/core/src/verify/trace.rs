//! Trace formula and modulation-space checks.

use super::Stopwatch;
use std::sync::Arc;

use super::{Measurement, SpecEcho, VerificationReport};
use crate::error::Result;
use crate::fourier::{lp_norm, random_band_limited, GridFunction};
use crate::modulation::{
    duality_check, mod_norm_from_stft, mode_norm_products, nuclearity_sums, phase_space_energy, stft,
    trace_formula_check, StftGrid, WeightSpec, NUCLEARITY_TAIL_LIMIT,
};
use crate::spectral::SpectralBasis;

/// Trace formula for `F(λ) = e^{-tλ}`: the spectral sum must match the
/// kernel-diagonal quadrature to `1e-8` relative. For the harmonic oscillator
/// in one dimension (`λ_j = 2j`) it must also be within `1e-6` of the
/// geometric series `1 / (e^{2t} - 1)`.
pub fn verify_trace(basis: &SpectralBasis, t: f64) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let spec = basis.spec();
    let check = trace_formula_check(|lam| (-t * lam).exp(), basis);
    let mut r = VerificationReport::new("trace", SpecEcho::new(spec, basis.trusted()));
    r.param_f64("t", t).param("F", "exp(-t lambda)");
    r.measure(Measurement::info("spectralSum", check.spectral_sum));
    r.measure(Measurement::info("kernelTrace", check.kernel_trace));
    let lams = basis.trusted_eigenvalues();
    let tail = (-t * (lams[lams.len() - 1] - lams[0])).exp();
    r.measure(Measurement::info("truncationRatio", tail));
    if tail > 1e-12 {
        r.note("F(lambda_Jok) exceeds 1e-12 max|F|: truncation is not negligible");
    }
    r.measure(Measurement::at_most(
        "relativeDifference",
        (check.spectral_sum - check.kernel_trace).abs() / check.spectral_sum.abs(),
        1e-8,
    ));
    if spec.n == 1 && spec.k == 1 && spec.l == 1 {
        let closed = 1.0 / ((2.0 * t).exp() - 1.0);
        r.measure(Measurement::info("geometricSeries", closed));
        r.measure(Measurement::within(
            "spectralSum.geometricSeries",
            check.spectral_sum,
            closed,
            1e-6,
        ));
    }
    r.series(
        "j vs F(lambda_j)",
        lams.iter()
            .enumerate()
            .map(|(j, l)| ((j + 1) as f64, (-t * l).exp()))
            .collect(),
    );
    r.runtime = start.elapsed();
    Ok(r)
}

/// Parameters of [`verify_modulation`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModulationParams {
    pub p: f64,
    pub q: f64,
    /// Weight order `s` of `v_s`.
    pub s: f64,
    /// Nuclearity order `r`.
    pub r: f64,
    /// Modes entering the nuclearity partial sums.
    pub j_max: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ModulationParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 2.0,
            s: 0.0,
            r: 1.0,
            j_max: 20,
            trials: 50,
            seed: 42,
        }
    }
}

/// Phase-space checks:
/// - the discrete orthogonality relation `Σ |V_g f|² ΔxΔξ/(2π) = ‖f‖²‖g‖²`
///   over seeded band-limited `f` (`1e-4` relative);
/// - `‖f‖_{M^{2,2}} = ‖f‖ ‖g‖` (`1e-3` relative);
/// - `⟨V_g u_j, V_g u_j⟩ = 1` (`1e-3`) and the Hölder duality bound (`1e-6`)
///   on the first modes;
/// - nuclearity: tail ratio below 0.5 for `F = e^{-λ}`, and at least 0.5
///   (divergence flagged) for `F ≡ 1`.
pub fn verify_modulation(basis: &Arc<SpectralBasis>, params: ModulationParams) -> Result<VerificationReport> {
    let start = Stopwatch::start();
    let grid = StftGrid::for_basis(basis)?;
    let g2 = grid.window_norm().powi(2);
    let mut r = VerificationReport::new("modulation", SpecEcho::new(basis.spec(), basis.trusted()));
    r.seed = Some(params.seed);
    r.param_f64("p", params.p)
        .param_f64("q", params.q)
        .param_f64("s", params.s)
        .param_f64("r", params.r)
        .param("jMax", params.j_max)
        .param("trials", params.trials)
        .param("shifts", grid.shifts().len())
        .param("frequencies", grid.frequencies().len());
    r.measure(Measurement::within("windowNorm", grid.window_norm(), 1.0, 1e-8));

    let mut moyal = 0.0f64;
    let mut m22 = 0.0f64;
    for i in 0..params.trials {
        let f = random_band_limited(basis, params.seed, i as u64);
        let v = stft(&f, &grid)?;
        let norm = lp_norm(&f, 2.0)?;
        let target = norm * norm * g2;
        moyal = moyal.max((phase_space_energy(&v, &grid) - target).abs() / target);
        let mn = mod_norm_from_stft(&v, &grid, 2.0, 2.0, WeightSpec::new(0.0))?;
        m22 = m22.max((mn - norm * g2.sqrt()).abs() / (norm * g2.sqrt()));
    }
    r.measure(Measurement::at_most("orthogonalityRelativeError", moyal, 1e-4));
    r.measure(Measurement::at_most("modNorm22RelativeError", m22, 1e-3));

    for j in 0..basis.trusted().min(4) {
        let v = stft(&GridFunction::mode(basis.clone(), j), &grid)?;
        let e = phase_space_energy(&v, &grid);
        r.measure(Measurement::within(format!("selfPairing[j={}]", j + 1), e, 1.0, 1e-3));
        let (pairing, bound) = duality_check(basis, &grid, j, params.p, params.q, params.s)?;
        r.measure(Measurement::at_least(
            format!("dualityBoundMinusPairing[j={}]", j + 1),
            bound - pairing,
            -1e-6,
        ));
    }

    let products = mode_norm_products(basis, &grid, params.p, params.q, params.s, params.j_max)?;
    let lams = basis.trusted_eigenvalues();
    let decaying = nuclearity_sums(|lam| (-lam).exp(), params.r, lams, &products)?;
    let constant = nuclearity_sums(|_| 1.0, params.r, lams, &products)?;
    r.measure(Measurement::info("modesUsed", decaying.partial_sums.len() as f64));
    r.measure(Measurement::info(
        "decaying.partialSum",
        *decaying.partial_sums.last().unwrap_or(&0.0),
    ));
    r.measure(Measurement::at_most(
        "decaying.tailRatio",
        decaying.tail_ratio,
        NUCLEARITY_TAIL_LIMIT,
    ));
    r.measure(Measurement::at_least(
        "constant.tailRatio",
        constant.tail_ratio,
        NUCLEARITY_TAIL_LIMIT,
    ));
    if let Some(g) = decaying.norm_growth_exponent {
        r.measure(Measurement::info("normProductGrowthExponent", g));
    }
    r.note("tail ratio is (S_J - S_{J/2}) / S_{J/2}; below 0.5 counts as converged");
    r.series(
        "J vs S_J (exp(-lambda))",
        decaying
            .partial_sums
            .iter()
            .enumerate()
            .map(|(j, s)| ((j + 1) as f64, *s))
            .collect(),
    );
    r.series(
        "J vs S_J (1)",
        constant
            .partial_sums
            .iter()
            .enumerate()
            .map(|(j, s)| ((j + 1) as f64, *s))
            .collect(),
    );
    r.runtime = start.elapsed();
    Ok(r)
}
