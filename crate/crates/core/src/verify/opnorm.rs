//! Lower bounds for `‖T‖_{L^p → L^q}` of a diagonal multiplier `T`, restricted
//! to the trusted span.
//!
//! Three probe families are combined: seeded random band-limited functions,
//! every basis function, and a nonlinear power iteration (Boyd's method) that
//! alternates `T`, the `q`-duality map, `T*` and the `p'`-duality map.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::conjugate_exponent;
use crate::error::{Error, Result};
use crate::fourier::{forward, inverse, lp_norm_values, random_band_limited_coefficients, CoefficientVector};
use crate::multiplier::{apply_coefficients, MultiplierSymbol};
use crate::spectral::SpectralBasis;

/// Power-iteration cap.
pub const POWER_ITERATIONS: usize = 50;
/// Relative change in the ratio below which power iteration stops.
pub const POWER_TOLERANCE: f64 = 1e-8;

/// Which probe family produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ProbeMethod {
    Random,
    Basis,
    PowerIteration,
}

/// Best ratio `‖T f‖_q / ‖f‖_p` found, with the maximizing probe.
#[derive(Clone, Debug)]
pub struct OpNormEstimate {
    pub lower_bound: f64,
    /// Number of ratio evaluations performed.
    pub probe_count: usize,
    /// Probe families that were run.
    pub methods: Vec<ProbeMethod>,
    /// Family of the maximizing probe.
    pub best_method: ProbeMethod,
    /// Coefficients of the maximizing probe `f*`.
    pub witness: CoefficientVector,
}

impl OpNormEstimate {
    /// Re-evaluates `‖T f*‖_q / ‖f*‖_p` from the stored witness.
    pub fn witness_ratio(&self, sym: &MultiplierSymbol, p: f64, q: f64) -> Result<f64> {
        ratio(sym, &self.witness, p, q)
    }
}

/// `‖T f‖_q / ‖f‖_p` for `f` given by its coefficients (0 when `f = 0`).
pub fn ratio(sym: &MultiplierSymbol, f: &CoefficientVector, p: f64, q: f64) -> Result<f64> {
    let w = f.basis().grid().weights();
    let fv = inverse(f);
    let den = lp_norm_values(w, fv.values(), p);
    if den == 0.0 {
        return Ok(0.0);
    }
    let tf = inverse(&apply_coefficients(sym, f)?);
    Ok(lp_norm_values(w, tf.values(), q) / den)
}

fn check_exponents(p: f64, q: f64) -> Result<()> {
    if p >= 1.0 && q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "exponents p = {p}, q = {q} must be in [1, inf]"
        )))
    }
}

/// Estimates `‖T_σ‖_{L^p → L^q}` from below.
///
/// Random probe `i` draws from stream `i` of `seed`, so the probe set for
/// `trials` is a prefix of the set for any larger count. Power iteration is
/// started from the best basis probe and from every random probe that beats
/// all probes before it; those starts are also prefix-stable, hence the bound
/// never decreases when `trials` grows.
pub fn estimate_op_norm(
    basis: &Arc<SpectralBasis>,
    sym: &MultiplierSymbol,
    p: f64,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<OpNormEstimate> {
    check_exponents(p, q)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if sym.len() != basis.trusted() {
        return Err(Error::BasisMismatch);
    }
    let methods = vec![ProbeMethod::Random, ProbeMethod::Basis, ProbeMethod::PowerIteration];
    if sym.sup_abs() == 0.0 {
        return Ok(OpNormEstimate {
            lower_bound: 0.0,
            probe_count: 0,
            methods,
            best_method: ProbeMethod::Basis,
            witness: CoefficientVector::unit(basis.clone(), 0),
        });
    }

    let jok = basis.trusted();
    let basis_ratios: Vec<Result<f64>> =
        crate::par::map_range(jok, |j| ratio(sym, &CoefficientVector::unit(basis.clone(), j), p, q));
    let basis_ratios = basis_ratios.into_iter().collect::<Result<Vec<_>>>()?;
    let random: Vec<Result<(CoefficientVector, f64)>> = crate::par::map_range(trials, |i| {
        let c = random_band_limited_coefficients(basis, seed, i as u64);
        let r = ratio(sym, &c, p, q)?;
        Ok((c, r))
    });
    let random = random.into_iter().collect::<Result<Vec<_>>>()?;
    let mut probe_count = jok + trials;

    let mut best_basis = 0;
    for (j, r) in basis_ratios.iter().enumerate() {
        if *r > basis_ratios[best_basis] {
            best_basis = j;
        }
    }
    let mut best = (
        basis_ratios[best_basis],
        ProbeMethod::Basis,
        CoefficientVector::unit(basis.clone(), best_basis),
    );

    let mut starts = vec![best.2.clone()];
    let mut record = best.0;
    for (c, r) in &random {
        if *r > record {
            record = *r;
            starts.push(c.clone());
        }
        if *r > best.0 {
            best = (*r, ProbeMethod::Random, c.clone());
        }
    }

    let refined: Vec<Result<(CoefficientVector, f64, usize)>> =
        crate::par::map_range(starts.len(), |i| power_iteration(sym, &starts[i], p, q));
    for res in refined {
        let (c, r, evals) = res?;
        probe_count += evals;
        if r > best.0 {
            best = (r, ProbeMethod::PowerIteration, c);
        }
    }

    Ok(OpNormEstimate {
        lower_bound: best.0,
        probe_count,
        methods,
        best_method: best.1,
        witness: best.2,
    })
}

/// Dual element of `g` for the `L^r` norm under quadrature weights `w`,
/// unnormalized: `|g|^{r-1} sgn g` for finite `r`, and for `r = ∞` a point
/// mass `sgn g(x_i) / w_i` at the first maximizer of `|g|`.
fn duality_map(g: &[Complex64], w: &[f64], r: f64) -> Vec<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    if r.is_infinite() {
        let mut out = vec![zero; g.len()];
        let mut ib = 0;
        for (i, v) in g.iter().enumerate() {
            if v.norm() > g[ib].norm() {
                ib = i;
            }
        }
        let m = g[ib].norm();
        if m > 0.0 {
            out[ib] = g[ib] / (m * w[ib]);
        }
        return out;
    }
    let scale = g.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return vec![zero; g.len()];
    }
    g.iter()
        .map(|v| {
            let a = v.norm();
            if a == 0.0 {
                zero
            } else {
                (v / a) * (a / scale).powf(r - 1.0)
            }
        })
        .collect()
}

/// Boyd's power iteration from `start`, with every iterate projected onto the
/// trusted span. Returns the best iterate, its ratio and the number of ratio
/// evaluations.
fn power_iteration(
    sym: &MultiplierSymbol,
    start: &CoefficientVector,
    p: f64,
    q: f64,
) -> Result<(CoefficientVector, f64, usize)> {
    let basis = start.basis().clone();
    let w = basis.grid().weights();
    let adjoint = sym.conj();
    let p_dual = conjugate_exponent(p);

    let mut x = start.clone();
    let mut best_r = ratio(sym, &x, p, q)?;
    let mut best = x.clone();
    let mut last = best_r;
    let mut evals = 1;
    for _ in 0..POWER_ITERATIONS {
        let y = inverse(&apply_coefficients(sym, &x)?);
        let gy = duality_map(y.values(), w, q);
        let gy = crate::fourier::GridFunction::new(basis.clone(), gy)?;
        let z = inverse(&apply_coefficients(&adjoint, &forward(&gy))?);
        let xz = duality_map(z.values(), w, p_dual);
        let next = forward(&crate::fourier::GridFunction::new(basis.clone(), xz)?);
        if next.l2_norm() == 0.0 {
            break;
        }
        let norm = next.l2_norm();
        let entries: Vec<Complex64> = next.entries().iter().map(|c| c / norm).collect();
        x = CoefficientVector::new(basis.clone(), entries)?;
        let r = ratio(sym, &x, p, q)?;
        evals += 1;
        if r > best_r {
            best_r = r;
            best = x.clone();
        }
        if (r - last).abs() <= POWER_TOLERANCE * r.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        last = r;
    }
    Ok((best, best_r, evals))
}
