//! Numerical harmonic analysis for the anharmonic oscillator
//! `A = (-Δ)^l + |x|^{2k} + 1` on `R^n`.
//!
//! The crate discretizes the operator on a truncated uniform grid, builds its
//! orthonormal eigenbasis, and on top of that basis provides the associated
//! Fourier transform, weighted sequence norms, diagonal (spectral) multipliers,
//! a short-time Fourier transform with modulation-space norms, and a harness
//! that checks the known inequalities and asymptotic exponents numerically.
//!
//! Layout:
//! - [`oscillator`]: the continuous problem and the symmetric matrix.
//! - [`spectral`]: eigenbasis, counting function, binary cache.
//! - [`fourier`]: transform pair, `L^p` norms, weighted `ℓ^p` norms.
//! - [`multiplier`]: diagonal operators and their bound quantities.
//! - [`modulation`]: STFT, modulation norms, nuclearity sums, trace check.
//! - [`verify`]: `L^p → L^q` norm estimation and verification reports.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod fourier;
pub mod linalg;
pub mod modulation;
pub mod multiplier;
pub mod oscillator;
pub mod spectral;
pub mod stats;
pub mod verify;

mod par;

pub use error::{CacheError, Error, Result};
pub use fourier::{CoefficientVector, GridFunction};
pub use multiplier::{MultiplierSymbol, SymbolKind};
pub use oscillator::{Grid, OscillatorSpec, Stencil, SymmetricMatrix};
pub use spectral::SpectralBasis;

pub use num_complex::Complex64;

/// Conjugate exponent `p' = p / (p - 1)`, with `1' = ∞` and `∞' = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1/p`, with `1/∞ = 0`.
pub(crate) fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// The exponent `C_{n,k,l} = 2 + (k + l) n / (2 k l)` governing the
/// multiplier, Sobolev and heat bounds.
pub fn c_nkl(n: usize, k: u32, l: u32) -> f64 {
    let (k, l) = (f64::from(k), f64::from(l));
    2.0 + (k + l) * n as f64 / (2.0 * k * l)
}

/// Counting-function exponent `n (1/(2k) + 1/(2l))`.
pub fn weyl_exponent(n: usize, k: u32, l: u32) -> f64 {
    let (k, l) = (f64::from(k), f64::from(l));
    n as f64 * (1.0 / (2.0 * k) + 1.0 / (2.0 * l))
}

/// Eigenvalue growth exponent `2kl / ((k + l) n)`, the reciprocal of
/// [`weyl_exponent`].
pub fn growth_exponent(n: usize, k: u32, l: u32) -> f64 {
    1.0 / weyl_exponent(n, k, l)
}
