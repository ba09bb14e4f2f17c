use anharmonic_wasm_demo::{preset, Explorer};

#[test]
fn harmonic_explorer_matches_closed_forms() {
    let p = preset(1, 1);
    let e = Explorer::try_new(1, 1, p[0], p[1] as usize, p[2] as usize).unwrap();
    assert_eq!(e.grid().len(), 2001);
    let lams = e.eigenvalues();
    assert_eq!(lams.len(), e.trusted());
    for (j, l) in lams.iter().enumerate().take(10) {
        assert!((l - 2.0 * (j + 1) as f64).abs() < 1e-6);
    }
    // u_1 = π^{-1/4} e^{-x²/2}
    let u = e.try_eigenfunction(0).unwrap();
    for (x, v) in e.grid().iter().zip(&u).step_by(50) {
        let exact = std::f64::consts::PI.powf(-0.25) * (-x * x / 2.0).exp();
        assert!((v - exact).abs() < 1e-6, "x = {x}");
    }
    assert!((e.try_weyl_slope().unwrap() - e.weyl_target()).abs() < 0.1);
    assert!(e.try_eigenfunction(e.trusted()).is_err());
}

#[test]
fn heat_norm_decays_monotonically() {
    let e = Explorer::try_new(1, 1, 10.0, 2001, 40).unwrap();
    let n = e.grid().len();
    let norms: Vec<f64> = [0.0, 0.01, 0.1, 0.5, 1.0]
        .iter()
        .map(|&t| {
            let v = e.try_heat(1.0, 1.5, t).unwrap();
            assert_eq!(v.len(), n + 1);
            v[n]
        })
        .collect();
    assert!(norms.windows(2).all(|w| w[1] < w[0]), "{norms:?}");
    // for large t only the ground state survives: ‖e^{-tA}f‖ ≈ e^{-2t}|⟨f,u_1⟩|
    let big = e.try_heat(0.0, 1.0, 3.0).unwrap();
    let c1: f64 = {
        let g = e.grid();
        let u = e.try_eigenfunction(0).unwrap();
        let h = g[1] - g[0];
        g.iter()
            .zip(&u)
            .filter(|(x, _)| x.abs() <= 1.0)
            .map(|(_, u)| u * h)
            .sum()
    };
    let expected = (-6.0f64).exp() * c1;
    assert!((big[n] - expected).abs() / expected < 0.02, "{} vs {expected}", big[n]);
    assert!(e.try_heat(0.0, 0.0, 1.0).is_err());
    assert!(e.try_heat(0.0, 1.0, -1.0).is_err());
}

#[test]
fn presets_solve_with_accurate_weyl_slopes() {
    for (k, l) in [(2, 1), (1, 2), (2, 2)] {
        let p = preset(k, l);
        let e = Explorer::try_new(k, l, p[0], p[1] as usize, p[2] as usize).unwrap();
        assert!(e.trusted() >= 20, "({k},{l}): {}", e.trusted());
        let slope = e.try_weyl_slope().unwrap();
        assert!(
            (slope - e.weyl_target()).abs() <= 0.1 * e.weyl_target(),
            "({k},{l}): {slope}"
        );
    }
}

#[test]
fn invalid_specs_are_reported() {
    assert!(Explorer::try_new(1, 1, 10.0, 4, 10).is_err());
    assert!(Explorer::try_new(0, 1, 10.0, 2001, 10).is_err());
}
