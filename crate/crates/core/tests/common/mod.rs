#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use anharmonic::{OscillatorSpec, SpectralBasis};

/// Harmonic oscillator `-d²/dx² + x² + 1` on `[-10, 10]`, 2001 points.
pub fn harmonic() -> Arc<SpectralBasis> {
    static B: OnceLock<Arc<SpectralBasis>> = OnceLock::new();
    B.get_or_init(|| Arc::new(SpectralBasis::solve(&OscillatorSpec::new(1, 1, 10.0, 2001, 40)).unwrap()))
        .clone()
}

/// `π^{-1/4}`, the sup of the harmonic ground state.
pub fn hermite_ground_sup() -> f64 {
    PI.powf(-0.25)
}

/// `‖π^{-1/4} e^{-x²/2}‖_p` in closed form.
pub fn hermite_ground_lp(p: f64) -> f64 {
    if p.is_infinite() {
        hermite_ground_sup()
    } else {
        PI.powf(-0.25) * (2.0 * PI / p).powf(1.0 / (2.0 * p))
    }
}
