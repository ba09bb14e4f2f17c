//! Operators diagonal in the eigenbasis, `â(j) ↦ σ(j) â(j)`, and the
//! bookkeeping constants of the Paley and `L^p → L^q` multiplier bounds.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{forward, inverse, CoefficientVector, GridFunction};
use crate::spectral::SpectralBasis;
use crate::{c_nkl, recip};

/// How a symbol was specified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    /// Arbitrary values `σ(j)`.
    Discrete,
    /// `σ(j) = φ(λ_j)` for a real function `φ`.
    Spectral,
}

/// A diagonal multiplier materialized over the trusted modes.
#[derive(Clone, Debug)]
pub struct MultiplierSymbol {
    kind: SymbolKind,
    values: Vec<Complex64>,
    basis_fingerprint: u64,
}

impl MultiplierSymbol {
    pub fn discrete(basis: &SpectralBasis, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != basis.trusted() {
            return Err(Error::InvalidArgument(format!(
                "symbol of length {} for {} trusted modes",
                values.len(),
                basis.trusted()
            )));
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument("non-finite symbol value".into()));
        }
        Ok(Self {
            kind: SymbolKind::Discrete,
            values,
            basis_fingerprint: basis.fingerprint(),
        })
    }

    /// `σ(j)` from a function of the 0-based mode index.
    pub fn from_index_fn(basis: &SpectralBasis, f: impl Fn(usize) -> Complex64) -> Result<Self> {
        Self::discrete(basis, (0..basis.trusted()).map(f).collect())
    }

    /// `σ(j) = φ(λ_j)`.
    pub fn spectral(basis: &SpectralBasis, phi: impl Fn(f64) -> f64) -> Result<Self> {
        let values = basis
            .trusted_eigenvalues()
            .iter()
            .map(|&lam| Complex64::new(phi(lam), 0.0))
            .collect();
        let mut s = Self::discrete(basis, values)?;
        s.kind = SymbolKind::Spectral;
        Ok(s)
    }

    /// `e^{-tλ}`.
    pub fn heat(basis: &SpectralBasis, t: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!("heat time {t} must be non-negative")));
        }
        Self::spectral(basis, |lam| (-t * lam).exp())
    }

    /// `λ^m`. Negative `m` is safe because every eigenvalue exceeds 1.
    pub fn power(basis: &SpectralBasis, m: f64) -> Result<Self> {
        let lam1 = basis.eigenvalues()[0];
        if !(lam1 > 1.0) {
            return Err(Error::InvalidArgument(format!("lowest eigenvalue {lam1} not above 1")));
        }
        Self::spectral(basis, |lam| lam.powf(m))
    }

    /// `c · δ_{j, j0}` (0-based `j0`).
    pub fn single_mode(basis: &SpectralBasis, j0: usize, c: Complex64) -> Result<Self> {
        if j0 >= basis.trusted() {
            return Err(Error::InvalidArgument(format!("mode {j0} not trusted")));
        }
        Self::from_index_fn(basis, |j| if j == j0 { c } else { Complex64::new(0.0, 0.0) })
    }

    pub fn constant(basis: &SpectralBasis, c: f64) -> Result<Self> {
        Self::spectral(basis, |_| c)
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max_j |σ(j)|`, the exact `L² → L²` norm of the diagonal operator.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            kind: self.kind,
            values: self.values.iter().map(|v| v * c).collect(),
            basis_fingerprint: self.basis_fingerprint,
        }
    }

    /// Pointwise product `σ τ`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.basis_fingerprint != other.basis_fingerprint {
            return Err(Error::BasisMismatch);
        }
        let kind = if self.kind == SymbolKind::Spectral && other.kind == SymbolKind::Spectral {
            SymbolKind::Spectral
        } else {
            SymbolKind::Discrete
        };
        Ok(Self {
            kind,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
            basis_fingerprint: self.basis_fingerprint,
        })
    }

    /// Adjoint symbol `σ̄`.
    pub fn conj(&self) -> Self {
        Self {
            kind: self.kind,
            values: self.values.iter().map(|v| v.conj()).collect(),
            basis_fingerprint: self.basis_fingerprint,
        }
    }

    fn check_basis(&self, basis: &SpectralBasis) -> Result<()> {
        if self.basis_fingerprint == basis.fingerprint() {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }
}

/// `σ(j) · â(j)` in coefficient space.
pub fn apply_coefficients(sym: &MultiplierSymbol, a: &CoefficientVector) -> Result<CoefficientVector> {
    sym.check_basis(a.basis())?;
    a.multiplied(&sym.values)
}

/// `inverse(σ · forward(f))`.
pub fn apply(sym: &MultiplierSymbol, f: &GridFunction) -> Result<GridFunction> {
    sym.check_basis(f.basis())?;
    Ok(inverse(&apply_coefficients(sym, &forward(f))?))
}

/// Heat propagator `e^{-tA} f`.
pub fn heat(t: f64, f: &GridFunction) -> Result<GridFunction> {
    apply(&MultiplierSymbol::heat(f.basis(), t)?, f)
}

/// Real power `A^m f`.
pub fn power(m: f64, f: &GridFunction) -> Result<GridFunction> {
    apply(&MultiplierSymbol::power(f.basis(), m)?, f)
}

/// Paley constant `M_φ = sup_t t · Σ_{φ(j) ≥ t} s_j²` for a positive sequence
/// `φ` over the trusted modes.
///
/// `t ↦ Σ_{φ(j) ≥ t} s_j²` is a left-continuous step function that only drops
/// just after each value `φ(j)`, so `t · Σ` is maximized at one of those
/// values; the maximum over them is exact.
pub fn paley_constant(basis: &SpectralBasis, phi: &[f64]) -> Result<f64> {
    if phi.len() != basis.trusted() {
        return Err(Error::InvalidArgument(format!(
            "sequence of length {} for {} trusted modes",
            phi.len(),
            basis.trusted()
        )));
    }
    if let Some(bad) = phi.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(format!("non-positive sequence value {bad}")));
    }
    let weights: Vec<f64> = basis.sup_norms()[..phi.len()].iter().map(|s| s * s).collect();
    Ok(jump_point_sup(phi, &weights, 1.0))
}

/// `max_{t ∈ values} t · (Σ_{values_j ≥ t} weights_j)^θ`, skipping zero values.
fn jump_point_sup(values: &[f64], weights: &[f64], theta: f64) -> f64 {
    let mut order: Vec<usize> = (0..values.len()).filter(|&j| values[j] > 0.0).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut best = 0.0f64;
    let mut acc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let t = values[order[i]];
        // include every index tied at this value
        while i < order.len() && values[order[i]] == t {
            acc += weights[order[i]];
            i += 1;
        }
        best = best.max(t * acc.powf(theta));
    }
    best
}

/// Right-hand side of the `L^p → L^q` multiplier theorem,
/// `sup_{s > 0} s · (Σ_{|σ(j)| ≥ s} s_j²)^{1/p - 1/q}`, evaluated at the jump
/// points `s ∈ {|σ(j)|}`. Requires `1 < p ≤ 2 ≤ q < ∞`.
pub fn multiplier_bound(basis: &SpectralBasis, sym: &MultiplierSymbol, p: f64, q: f64) -> Result<f64> {
    sym.check_basis(basis)?;
    if !(p > 1.0 && p <= 2.0 && q >= 2.0 && q.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "multiplier bound needs 1 < p <= 2 <= q < inf, got p = {p}, q = {q}"
        )));
    }
    let abs: Vec<f64> = sym.values.iter().map(|v| v.norm()).collect();
    let weights: Vec<f64> = basis.sup_norms()[..abs.len()].iter().map(|s| s * s).collect();
    Ok(jump_point_sup(&abs, &weights, recip(p) - recip(q)))
}

/// Location and value of a one-dimensional supremum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Supremum {
    pub value: f64,
    pub argmax: f64,
}

/// `sup_{1 ≤ u ≤ u_max} φ(u) · u^{C (1/p - 1/q)}` with `C = C_{n,k,l}`.
///
/// The maximum is located on a 2048-point logarithmic grid, refined by
/// golden-section search in `log u`, and polished by bisection on a
/// central-difference derivative when the maximum is interior.
pub fn spectral_bound_rhs(
    phi: impl Fn(f64) -> f64,
    p: f64,
    q: f64,
    n: usize,
    k: u32,
    l: u32,
    u_max: f64,
) -> Result<Supremum> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::InvalidArgument(format!("exponents p = {p}, q = {q} below 1")));
    }
    if !(u_max >= 1.0 && u_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "upper limit {u_max} must be at least 1"
        )));
    }
    let a = c_nkl(n, k, l) * (recip(p) - recip(q));
    Ok(maximize_log(|v| phi(v.exp()) * (a * v).exp(), 0.0, u_max.ln()))
}

/// Closed form of `sup_{u > 0} e^{-tu} u^a = (a/t)^a e^{-a}`, attained at
/// `u_0 = a / t` (`a ≥ 0`, `t > 0`).
pub fn heat_sup_closed_form(t: f64, a: f64) -> Supremum {
    if a == 0.0 {
        return Supremum {
            value: 1.0,
            argmax: 0.0,
        };
    }
    let u0 = a / t;
    Supremum {
        value: u0.powf(a) * (-a).exp(),
        argmax: u0,
    }
}

fn maximize_log(g: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Supremum {
    if hi <= lo {
        return Supremum {
            value: g(lo),
            argmax: lo.exp(),
        };
    }
    const GRID: usize = 2048;
    let pts: Vec<f64> = (0..GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64)
        .collect();
    let vals: Vec<f64> = pts.iter().map(|&v| g(v)).collect();
    let mut ib = 0;
    for (i, v) in vals.iter().enumerate() {
        if *v > vals[ib] {
            ib = i;
        }
    }
    let (mut a, mut b) = (pts[ib.saturating_sub(1)], pts[(ib + 1).min(GRID - 1)]);
    let invphi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..200 {
        if b - a <= 1e-15 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - invphi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + invphi * (b - a);
            gd = g(d);
        }
    }
    let mut v = 0.5 * (a + b);

    // golden section only resolves the argmax to ~sqrt(eps); polish it
    if v > lo + 1e-6 && v < hi - 1e-6 {
        let delta = 1e-5 * (1.0 + v.abs());
        let slope = |x: f64| (g(x + delta).ln() - g(x - delta).ln()) / (2.0 * delta);
        let (mut left, mut right) = (v - 1e-3 * (1.0 + v.abs()), v + 1e-3 * (1.0 + v.abs()));
        left = left.max(lo);
        right = right.min(hi);
        let (sl, sr) = (slope(left), slope(right));
        if sl.is_finite() && sr.is_finite() && sl > 0.0 && sr < 0.0 {
            for _ in 0..100 {
                let mid = 0.5 * (left + right);
                if mid <= left || mid >= right {
                    break;
                }
                if slope(mid) > 0.0 {
                    left = mid;
                } else {
                    right = mid;
                }
            }
            let polished = 0.5 * (left + right);
            if g(polished) >= g(v) * (1.0 - 1e-14) {
                v = polished;
            }
        }
    }
    let endpoints = [(lo, vals[0]), (hi, vals[GRID - 1])];
    let mut best = Supremum {
        value: g(v),
        argmax: v.exp(),
    };
    for (x, gx) in endpoints {
        if gx > best.value {
            best = Supremum {
                value: gx,
                argmax: x.exp(),
            };
        }
    }
    best
}

/// Convenience: the spectral multiplier `φ(A)` applied to `f`.
pub fn apply_spectral(phi: impl Fn(f64) -> f64, f: &GridFunction) -> Result<GridFunction> {
    apply(&MultiplierSymbol::spectral(f.basis(), phi)?, f)
}
