mod common;

use anharmonic::verify::{estimate_op_norm, ProbeMethod};
use anharmonic::{Complex64, MultiplierSymbol};
use common::harmonic;

#[test]
fn l2_norm_of_inverse_is_one_half() {
    let b = harmonic();
    let sym = MultiplierSymbol::power(&b, -1.0).unwrap();
    let est = estimate_op_norm(&b, &sym, 2.0, 2.0, 20, 1).unwrap();
    let exact = 1.0 / b.eigenvalues()[0];
    assert!((est.lower_bound - exact).abs() < 1e-8);
    assert!((exact - 0.5).abs() < 1e-8);
}

#[test]
fn identity_has_norm_at_least_one() {
    let b = harmonic();
    let sym = MultiplierSymbol::constant(&b, 1.0).unwrap();
    for p in [1.0, 1.5, 2.0, 4.0, f64::INFINITY] {
        let est = estimate_op_norm(&b, &sym, p, p, 10, 2).unwrap();
        assert!(est.lower_bound >= 1.0 - 1e-9, "p = {p}: {}", est.lower_bound);
    }
}

#[test]
fn rank_one_norm_is_sup_of_mode() {
    let b = harmonic();
    let sym = MultiplierSymbol::single_mode(&b, 0, Complex64::new(1.0, 0.0)).unwrap();
    let est = estimate_op_norm(&b, &sym, 2.0, f64::INFINITY, 20, 3).unwrap();
    assert!((est.lower_bound - b.sup_norms()[0]).abs() < 1e-10);
    assert!((b.sup_norms()[0] - std::f64::consts::PI.powf(-0.25)).abs() < 1e-4);
}

#[test]
fn witness_reproduces_bound() {
    let b = harmonic();
    for (p, q) in [(1.5, 3.0), (2.0, f64::INFINITY), (1.2, 1.2)] {
        let sym = MultiplierSymbol::heat(&b, 0.1).unwrap();
        let est = estimate_op_norm(&b, &sym, p, q, 30, 4).unwrap();
        let again = est.witness_ratio(&sym, p, q).unwrap();
        assert!((again - est.lower_bound).abs() <= 1e-12 * est.lower_bound);
        assert_eq!(
            est.methods,
            vec![ProbeMethod::Random, ProbeMethod::Basis, ProbeMethod::PowerIteration]
        );
        assert!(est.probe_count >= 30 + b.trusted());
    }
}

#[test]
fn monotone_in_trials() {
    let b = harmonic();
    let sym = MultiplierSymbol::power(&b, -1.5).unwrap();
    let mut last = 0.0;
    for trials in [1, 5, 20, 60] {
        let est = estimate_op_norm(&b, &sym, 1.5, 3.0, trials, 9).unwrap();
        assert!(est.lower_bound >= last, "{trials}: {} < {last}", est.lower_bound);
        last = est.lower_bound;
    }
}

#[test]
fn scale_equivariance() {
    let b = harmonic();
    let sym = MultiplierSymbol::power(&b, -1.0).unwrap();
    let big = sym.scaled(Complex64::new(-7.0, 0.0));
    let e1 = estimate_op_norm(&b, &sym, 1.5, 3.0, 25, 5).unwrap();
    let e2 = estimate_op_norm(&b, &big, 1.5, 3.0, 25, 5).unwrap();
    assert!((e2.lower_bound - 7.0 * e1.lower_bound).abs() <= 1e-12 * e2.lower_bound);
}

#[test]
fn deterministic_for_fixed_seed() {
    let b = harmonic();
    let sym = MultiplierSymbol::heat(&b, 0.05).unwrap();
    let a = estimate_op_norm(&b, &sym, 2.0, f64::INFINITY, 40, 11).unwrap();
    let c = estimate_op_norm(&b, &sym, 2.0, f64::INFINITY, 40, 11).unwrap();
    assert_eq!(a.lower_bound.to_bits(), c.lower_bound.to_bits());
    assert_eq!(a.witness.entries(), c.witness.entries());
}

#[test]
fn degenerate_inputs() {
    let b = harmonic();
    let zero = MultiplierSymbol::constant(&b, 0.0).unwrap();
    assert_eq!(estimate_op_norm(&b, &zero, 1.5, 3.0, 5, 0).unwrap().lower_bound, 0.0);
    let one = MultiplierSymbol::constant(&b, 1.0).unwrap();
    assert!(estimate_op_norm(&b, &one, 1.5, 3.0, 0, 0).is_err());
    assert!(estimate_op_norm(&b, &one, 0.5, 3.0, 5, 0).is_err());
}
