mod common;

use std::sync::Arc;

use anharmonic::fourier::{lp_norm, random_band_limited};
use anharmonic::modulation::{
    duality_check, mod_norm, mode_norm_products, nuclearity_condition, nuclearity_sums, phase_space_energy, stft,
    trace_formula_check, window, StftGrid, WeightSpec,
};
use anharmonic::{Complex64, Error, GridFunction, OscillatorSpec, SpectralBasis};
use common::harmonic;

fn grid() -> StftGrid {
    StftGrid::for_basis(&harmonic()).unwrap()
}

#[test]
fn grid_layout() {
    let g = grid();
    let b = harmonic();
    let h = b.grid().step();
    assert!((g.window_norm() - 1.0).abs() < 1e-8);
    assert!((g.dx() - 4.0 * h).abs() < 1e-15);
    assert!(g.frequencies().len() >= g.shifts().len());
    assert_eq!(g.frequencies().len() % 2, 0);
    assert!(g.shifts()[0] <= -10.0 - 3.5 + 1e-12);
    assert!(*g.shifts().last().unwrap() >= 10.0 + 3.5 - 1e-12);
    assert!((g.frequencies()[0] + std::f64::consts::PI / h).abs() < 1e-9);
    assert!(g.frequencies().contains(&0.0));
    assert!(g.shifts().iter().any(|x| x.abs() < 1e-12));
}

#[test]
fn transform_of_zero_is_zero() {
    let v = stft(&GridFunction::zeros(harmonic()), &grid()).unwrap();
    assert!(v.values().iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    assert_eq!(
        mod_norm(
            &GridFunction::zeros(harmonic()),
            1.5,
            3.0,
            WeightSpec::new(1.0),
            &grid()
        )
        .unwrap(),
        0.0
    );
}

#[test]
fn window_autocorrelation_peak() {
    let b = harmonic();
    let g = grid();
    let f = GridFunction::from_fn(b, |x| Complex64::new(window(x[0]), 0.0)).unwrap();
    let v = stft(&f, &g).unwrap();
    let m = g.shifts().iter().position(|x| x.abs() < 1e-12).unwrap();
    let r = g.frequencies().iter().position(|x| *x == 0.0).unwrap();
    assert!((v.get(m, r).re - 1.0).abs() < 1e-6, "{}", v.get(m, r));
    assert!(v.get(m, r).im.abs() < 1e-6);
}

#[test]
fn orthogonality_relation_over_fifty_trials() {
    let b = harmonic();
    let g = grid();
    let g2 = g.window_norm().powi(2);
    for i in 0..50 {
        let f = random_band_limited(&b, 99, i);
        let v = stft(&f, &g).unwrap();
        let n2 = lp_norm(&f, 2.0).unwrap().powi(2);
        let rel = (phase_space_energy(&v, &g) - n2 * g2).abs() / (n2 * g2);
        assert!(rel <= 1e-4, "trial {i}: {rel}");
    }
}

#[test]
fn transform_vanishes_at_grid_edges() {
    let b = harmonic();
    let g = grid();
    let f = random_band_limited(&b, 8, 0);
    let v = stft(&f, &g).unwrap();
    let (ms, rs) = v.shape();
    let peak = v.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let edge = (0..rs)
        .flat_map(|r| [v.get(0, r), v.get(ms - 1, r)])
        .chain((0..ms).flat_map(|m| [v.get(m, 0), v.get(m, rs - 1)]))
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    assert!(edge <= 1e-12 * peak, "edge {edge} vs peak {peak}");
}

#[test]
fn mod_norm_examples() {
    let b = harmonic();
    let g = grid();
    let f = random_band_limited(&b, 12, 3);
    let m = mod_norm(&f, 2.0, 2.0, WeightSpec::new(0.0), &g).unwrap();
    let want = lp_norm(&f, 2.0).unwrap() * g.window_norm();
    assert!((m - want).abs() <= 1e-3 * want);
    for (p, q, s) in [(1.5, 3.0, 1.0), (1.0, 1.0, 0.0), (f64::INFINITY, 2.0, -1.0)] {
        let base = mod_norm(&f, p, q, WeightSpec::new(s), &g).unwrap();
        let scaled = mod_norm(&f.scaled(Complex64::new(0.0, -3.0)), p, q, WeightSpec::new(s), &g).unwrap();
        assert!((scaled - 3.0 * base).abs() <= 1e-12 * scaled, "({p}, {q}, {s})");
    }
    assert!(mod_norm(&f, 0.5, 2.0, WeightSpec::new(0.0), &g).is_err());
}

#[test]
fn weight_properties() {
    for s in [0.0, 0.5, 2.0] {
        let w = WeightSpec::new(s);
        for (x, xi) in [(0.0, 0.0), (3.0, -1.0), (-7.5, 40.0)] {
            assert!(w.eval(x, xi) >= 1.0);
            assert!((w.eval(x, xi) * w.inverse().eval(x, xi) - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn self_pairing_of_modes() {
    let b = harmonic();
    let g = grid();
    for j in 0..6 {
        let v = stft(&GridFunction::mode(b.clone(), j), &g).unwrap();
        assert!((phase_space_energy(&v, &g) - 1.0).abs() <= 1e-3, "mode {j}");
    }
}

#[test]
fn holder_duality_bound() {
    let b = harmonic();
    let g = grid();
    for (p, q, s) in [(2.0, 2.0, 0.0), (1.5, 3.0, 1.0), (1.0, 4.0, 2.0), (3.0, 1.2, 0.5)] {
        for j in [0, 3, 7] {
            let (pairing, bound) = duality_check(&b, &g, j, p, q, s).unwrap();
            assert!((pairing - 1.0).abs() < 1e-10);
            assert!(pairing <= bound + 1e-6, "({p}, {q}, {s}) mode {j}: {pairing} > {bound}");
        }
    }
}

#[test]
fn nuclearity_examples() {
    let b = harmonic();
    let g = grid();
    let products = mode_norm_products(&b, &g, 2.0, 2.0, 0.0, 20).unwrap();
    let lams = b.trusted_eigenvalues();
    let zero = nuclearity_sums(|_| 0.0, 1.0, lams, &products).unwrap();
    assert!(zero.partial_sums.iter().all(|s| *s == 0.0));
    assert!(zero.converged);

    let decaying = nuclearity_condition(|l| (-l).exp(), 1.0, 2.0, 2.0, 0.0, &b, &g, 20).unwrap();
    assert!(decaying.tail_ratio < 0.5);
    assert!(decaying.converged);
    assert_eq!(decaying.partial_sums.len(), 20.min(b.trusted()));

    let constant = nuclearity_sums(|_| 1.0, 1.0, lams, &products).unwrap();
    assert!(!constant.converged);
    assert!(constant.partial_sums.windows(2).all(|w| w[1] > w[0]));
    let least = products.iter().copied().fold(f64::INFINITY, f64::min);
    for (j, s) in constant.partial_sums.iter().enumerate() {
        assert!(*s >= (j + 1) as f64 * least * (1.0 - 1e-12));
    }
    assert!(nuclearity_sums(|_| 1.0, 0.0, lams, &products).is_err());
    // fractional r is accepted arithmetically
    let frac = nuclearity_sums(|l| (-l).exp(), 0.5, lams, &products).unwrap();
    assert!(frac.converged);
}

#[test]
fn trace_formula_examples() {
    let b = harmonic();
    let heat = trace_formula_check(|l| (-l).exp(), &b);
    assert!((heat.spectral_sum - heat.kernel_trace).abs() <= 1e-8 * heat.spectral_sum);
    assert!((heat.spectral_sum - 1.0 / (2f64.exp() - 1.0)).abs() < 1e-6);
    let l1 = b.eigenvalues()[0];
    let delta = trace_formula_check(|l| if l == l1 { 0.7 } else { 0.0 }, &b);
    assert_eq!(delta.spectral_sum, 0.7);
    assert!((delta.kernel_trace - 0.7).abs() < 1e-12);
}

#[test]
fn inverse_cube_trace_matches_zeta_sum() {
    let b = SpectralBasis::solve(&OscillatorSpec::new(1, 1, 16.0, 4097, 70)).unwrap();
    assert!(b.trusted() >= 60, "J_ok = {}", b.trusted());
    let b = b.truncated(60).unwrap();
    let t = trace_formula_check(|l| l.powi(-3), &b);
    assert!((t.spectral_sum - t.kernel_trace).abs() <= 1e-8 * t.spectral_sum);
    let partial: f64 = (1..=60).map(|j| (2.0 * j as f64).powi(-3)).sum();
    assert!((t.spectral_sum - partial).abs() <= 1e-6 * partial);
    // ζ(3)/8 minus the partial sum is bounded by the integral tail
    let zeta3 = 1.202_056_903_159_594_3;
    let tail = zeta3 / 8.0 - partial;
    assert!(tail > 0.0 && tail <= 1.0 / (16.0 * 59.5 * 59.5));
}

#[test]
fn planar_bases_are_unsupported() {
    let b = Arc::new(SpectralBasis::solve(&OscillatorSpec::new(1, 1, 8.0, 28, 4).with_dim(2)).unwrap());
    assert!(b.trusted() >= 1);
    assert!(matches!(StftGrid::for_basis(&b), Err(Error::Unsupported(_))));
}
