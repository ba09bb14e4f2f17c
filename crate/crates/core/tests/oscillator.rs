#![allow(clippy::needless_range_loop)]

use anharmonic::linalg::{dense_eigen, DenseMatrix};
use anharmonic::oscillator::{assemble_operator, potential};
use anharmonic::{Error, OscillatorSpec, SpectralBasis, Stencil};

fn dense(spec: &OscillatorSpec) -> DenseMatrix {
    assemble_operator(spec).unwrap().to_dense()
}

/// Dirichlet three-point `-d²/dx²` on `m` interior points.
fn second_difference(m: usize, h: f64) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; m]; m];
    for i in 0..m {
        d[i][i] = 2.0 / (h * h);
        if i + 1 < m {
            d[i][i + 1] = -1.0 / (h * h);
            d[i + 1][i] = -1.0 / (h * h);
        }
    }
    d
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = a.len();
    (0..m)
        .map(|i| (0..m).map(|j| (0..m).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Independent oracle: lowest eigenvalue of a symmetric tridiagonal matrix
/// with constant off-diagonal by Sturm-count bisection.
fn sturm_lowest(diag: &[f64], off: f64) -> f64 {
    let count = |s: f64| {
        let mut q = 1.0f64;
        let mut c = 0;
        for (i, d) in diag.iter().enumerate() {
            q = d - s - if i == 0 { 0.0 } else { off * off / q };
            if q == 0.0 {
                q = 1e-300;
            }
            if q < 0.0 {
                c += 1;
            }
        }
        c
    };
    let (mut lo, mut hi) = (0.0, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn quartic_three_point(big_l: f64, n: usize) -> f64 {
    let h = 2.0 * big_l / (n - 1) as f64;
    let diag: Vec<f64> = (1..n - 1)
        .map(|i| {
            let x = -big_l + i as f64 * h;
            2.0 / (h * h) + x.powi(4) + 1.0
        })
        .collect();
    sturm_lowest(&diag, -1.0 / (h * h))
}

#[test]
fn potential_examples() {
    assert_eq!(potential(1, &[0.0]), 1.0);
    assert_eq!(potential(2, &[1.0]), 2.0);
    assert_eq!(potential(3, &[2.0]), 65.0);
    let spec = OscillatorSpec::new(3, 1, 4.0, 101, 4);
    assert_eq!(spec.potential_at(&[2.0]), 65.0);
}

#[test]
fn grid_weights_and_symmetry() {
    let spec = OscillatorSpec::new(1, 1, 8.0, 1001, 10);
    let g = spec.grid();
    let total: f64 = g.weights().iter().sum();
    assert!((total - 16.0).abs() < 1e-12);
    assert!(g.weights().iter().all(|w| *w > 0.0));
    let x = g.axis();
    for i in 0..x.len() {
        assert_eq!(x[i], -x[x.len() - 1 - i]);
    }
    assert_eq!(x[0], -8.0);
    assert_eq!(x[x.len() - 1], 8.0);
}

#[test]
fn toy_three_point_rows_match_hand_expansion() {
    // N = 17 is the smallest admissible size close to the five-point toy.
    let spec = OscillatorSpec::new(1, 1, 8.0, 17, 4).with_stencil(Stencil::ThreePoint);
    let m = dense(&spec);
    let h = 1.0;
    assert_eq!(spec.step(), h);
    assert_eq!(m.dim(), 15);
    let c = 7; // interior index of x = 0
    assert_eq!(m.get(c, c - 1), -1.0 / (h * h));
    assert_eq!(m.get(c, c), 2.0 / (h * h) + 0.0 + 1.0);
    assert_eq!(m.get(c, c + 1), -1.0 / (h * h));
    assert_eq!(m.get(c, c + 2), 0.0);
    // x = 3 at interior index 10
    assert_eq!(m.get(10, 10), 2.0 + 9.0 + 1.0);
    // the five-point toy size itself is rejected
    let toy = OscillatorSpec::new(1, 1, 8.0, 5, 2);
    assert!(matches!(toy.validate(), Err(Error::InvalidSpec(_))));
}

#[test]
fn l2_is_square_of_l1_difference_matrix() {
    let spec = OscillatorSpec::new(1, 2, 3.0, 41, 4).with_stencil(Stencil::ThreePoint);
    let h = spec.step();
    let m = dense(&spec);
    let d = second_difference(39, h);
    let dd = matmul(&d, &d);
    let x = spec.grid();
    let scale = 6.0 / h.powi(4);
    for i in 0..39 {
        for j in 0..39 {
            let want = dd[i][j] + if i == j { potential(1, &[x.axis()[i + 1]]) } else { 0.0 };
            assert!((m.get(i, j) - want).abs() <= 1e-13 * scale, "({i},{j})");
        }
    }
}

#[test]
fn five_point_l2_is_square_of_l1() {
    let base = OscillatorSpec::new(1, 1, 3.0, 41, 4);
    let sq = OscillatorSpec::new(1, 2, 3.0, 41, 4);
    let m1 = dense(&base);
    let m2 = dense(&sq);
    let x = base.grid();
    let n = m1.dim();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            d[i][j] = m1.get(i, j) - if i == j { potential(1, &[x.axis()[i + 1]]) } else { 0.0 };
        }
    }
    let dd = matmul(&d, &d);
    let scale = dd[n / 2][n / 2];
    for i in 0..n {
        for j in 0..n {
            let want = dd[i][j] + if i == j { potential(1, &[x.axis()[i + 1]]) } else { 0.0 };
            assert!((m2.get(i, j) - want).abs() <= 1e-13 * scale, "({i},{j})");
        }
    }
}

#[test]
fn matrices_are_exactly_symmetric() {
    for spec in [
        OscillatorSpec::new(2, 3, 4.0, 201, 10),
        OscillatorSpec::new(1, 2, 4.0, 201, 10).with_stencil(Stencil::ThreePoint),
        OscillatorSpec::new(1, 2, 5.0, 40, 10).with_dim(2),
        OscillatorSpec::new(2, 1, 4.0, 33, 10).with_dim(2),
    ] {
        assert_eq!(dense(&spec).max_asymmetry(), 0.0, "{spec:?}");
    }
}

#[test]
fn dense_budget_is_enforced() {
    let spec = OscillatorSpec::new(1, 1, 5.0, 97, 10).with_dim(2);
    assert!(matches!(assemble_operator(&spec), Err(Error::DenseBudget { .. })));
}

#[test]
fn lowest_eigenvalue_exceeds_one() {
    for spec in [
        OscillatorSpec::new(1, 1, 8.0, 401, 8),
        OscillatorSpec::new(2, 2, 8.0, 801, 8),
        OscillatorSpec::new(3, 1, 3.0, 401, 8),
    ] {
        let b = SpectralBasis::solve(&spec).unwrap();
        assert!(b.eigenvalues()[0] > 1.0, "{spec:?}");
    }
    let planar = OscillatorSpec::new(1, 2, 4.0, 24, 8).with_dim(2);
    let (vals, _) = dense_eigen(&dense(&planar)).unwrap();
    assert!(vals[0] > 1.0);
}

fn convergence_order(stencil: Stencil) -> Vec<f64> {
    let levels: Vec<Vec<f64>> = [257usize, 513, 1025]
        .iter()
        .map(|&n| {
            let spec = OscillatorSpec::new(1, 1, 8.0, n, 16).with_stencil(stencil);
            SpectralBasis::solve(&spec).unwrap().eigenvalues()[..4].to_vec()
        })
        .collect();
    (0..4)
        .map(|j| {
            let e1 = (levels[0][j] - levels[1][j]).abs();
            let e2 = (levels[1][j] - levels[2][j]).abs();
            (e1 / e2).log2()
        })
        .collect()
}

#[test]
fn three_point_converges_at_second_order() {
    for order in convergence_order(Stencil::ThreePoint) {
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }
}

#[test]
fn five_point_converges_at_fourth_order() {
    for order in convergence_order(Stencil::FivePoint) {
        assert!((3.7..=4.3).contains(&order), "order {order}");
    }
}

#[test]
fn quartic_ground_state_matches_extrapolated_oracle() {
    let coarse = quartic_three_point(6.0, 2049);
    let fine = quartic_three_point(6.0, 4097);
    let oracle = (4.0 * fine - coarse) / 3.0;
    assert!((oracle - 2.0603621).abs() < 5e-8, "oracle {oracle}");
    let spec = OscillatorSpec::new(2, 1, 6.0, 2049, 8);
    let lam = SpectralBasis::solve(&spec).unwrap().eigenvalues()[0];
    assert!((lam - oracle).abs() / oracle < 1e-8, "{lam} vs {oracle}");
}

#[test]
fn default_helpers() {
    assert!((OscillatorSpec::default_half_width(1, 25.0) - 10.0).abs() < 1e-12);
    assert!((OscillatorSpec::max_step(1, 100.0) - 0.01).abs() < 1e-12);
    assert!(OscillatorSpec::new(1, 1, 10.0, 2001, 40).check_resolution(50.0));
    assert!(!OscillatorSpec::new(1, 1, 10.0, 101, 40).check_resolution(50.0));
}
