//! Numerical verification harness.
//!
//! The inequalities under test hide unknown constants, so most checks record
//! an empirical ratio and require it to be stable: it may change by at most a
//! factor [`STABILITY_FACTOR`] when the grid is refined (`N → 2N - 1`, which
//! nests the old grid in the new one) and when the number of trusted modes is
//! doubled (compared by halving it). Where the constant is exactly known
//! (Hausdorff–Young, Plancherel, `p = q = 2` collapses) it is asserted.

mod asymptotics;
mod inequalities;
mod operators;
mod opnorm;
mod report;
mod trace;

use std::sync::Arc;

pub use asymptotics::{verify_growth_slope, verify_sup_norm_bound, verify_weyl_slope, SlopeWindow};
pub use inequalities::{
    hyp_ratios, paley_ratios, verify_hausdorff_young, verify_hyp, verify_paley, verify_plancherel, Phi,
};
pub use operators::{
    default_heat_times, sobolev_ratio, verify_heat_decay, verify_multiplier_theorem, verify_sobolev_estimate,
    SymbolSpec,
};
pub use opnorm::{estimate_op_norm, ratio, OpNormEstimate, ProbeMethod, POWER_ITERATIONS, POWER_TOLERANCE};
pub use report::{
    format_f64, read_series_csv, series_path, write_report_files, write_series_csv, Measurement, Relation, Series,
    SpecEcho, Verdict, VerificationReport,
};
pub use trace::{verify_modulation, verify_trace, ModulationParams};

use crate::error::Result;
use crate::oscillator::OscillatorSpec;
use crate::spectral::SpectralBasis;

/// Wall-clock timer for report runtimes. Reads zero on wasm32, where
/// `std::time::Instant` is unavailable.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Self(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    pub(crate) fn elapsed(&self) -> std::time::Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed();
        #[cfg(target_arch = "wasm32")]
        return std::time::Duration::ZERO;
    }
}

/// Largest admissible change factor of a recorded constant.
pub const STABILITY_FACTOR: f64 = 1.1;

/// `max(a/b, b/a)`; 1 when both vanish, infinite when exactly one does.
pub fn change_factor(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else if a == 0.0 || b == 0.0 {
        f64::INFINITY
    } else {
        (a / b).max(b / a)
    }
}

/// A basis together with its refinement and a half-truncation, aligned so
/// that the base and refined bases trust the same number of modes.
#[derive(Clone, Debug)]
pub struct StabilityBases {
    pub base: Arc<SpectralBasis>,
    /// Same problem on `2N - 1` points per axis.
    pub refined: Arc<SpectralBasis>,
    /// The base with only the first `J_ok / 2` modes trusted.
    pub halved: Arc<SpectralBasis>,
}

impl StabilityBases {
    pub fn solve(spec: &OscillatorSpec) -> Result<Self> {
        let base = SpectralBasis::solve(spec)?;
        let mut fine = spec.clone();
        fine.grid_points = 2 * spec.grid_points - 1;
        let refined = SpectralBasis::solve(&fine)?;
        Self::from_bases(base, refined)
    }

    pub fn from_bases(base: SpectralBasis, refined: SpectralBasis) -> Result<Self> {
        let j = base.trusted().min(refined.trusted());
        let base = base.truncated(j)?;
        let refined = refined.truncated(j)?;
        let halved = base.truncated((j / 2).max(1))?;
        Ok(Self {
            base: Arc::new(base),
            refined: Arc::new(refined),
            halved: Arc::new(halved),
        })
    }

    pub fn echo(&self) -> SpecEcho {
        SpecEcho::new(self.base.spec(), self.base.trusted())
    }

    /// Records the three values and their two change factors, failing the
    /// report if either factor exceeds [`STABILITY_FACTOR`].
    pub(crate) fn record(&self, report: &mut VerificationReport, name: &str, values: [f64; 3]) {
        let [base, refined, halved] = values;
        report.measure(Measurement::finite(name, base));
        report.measure(Measurement::info(format!("{name}.refined"), refined));
        report.measure(Measurement::info(format!("{name}.halvedModes"), halved));
        report.measure(Measurement::at_most(
            format!("{name}.refinementChange"),
            change_factor(base, refined),
            STABILITY_FACTOR,
        ));
        report.measure(Measurement::at_most(
            format!("{name}.modeDoublingChange"),
            change_factor(halved, base),
            STABILITY_FACTOR,
        ));
    }

    pub(crate) fn all(&self) -> [&Arc<SpectralBasis>; 3] {
        [&self.base, &self.refined, &self.halved]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn change_factor_is_symmetric() {
        assert_eq!(change_factor(2.0, 1.0), 2.0);
        assert_eq!(change_factor(1.0, 2.0), 2.0);
        assert_eq!(change_factor(0.0, 0.0), 1.0);
        assert_eq!(change_factor(0.0, 1.0), f64::INFINITY);
    }
}
