//! Browser explorer: eigenfunctions, heat evolution and the Weyl counting
//! function of `(-Δ)^l + |x|^{2k} + 1` on a line.
//!
//! Every binding has a `try_*` twin returning `Result<_, String>` so the
//! logic is testable off the browser.

use std::sync::Arc;

use anharmonic::fourier::{lp_norm, GridFunction};
use anharmonic::multiplier::heat;
use anharmonic::stats::fit_log_log;
use anharmonic::{weyl_exponent, OscillatorSpec, SpectralBasis};
use wasm_bindgen::prelude::*;

/// Box half-width, grid points and requested modes that give a healthy
/// trusted prefix for `(k, l)`.
#[wasm_bindgen]
pub fn preset(k: u32, l: u32) -> Vec<f64> {
    match (k, l) {
        (1, 1) => vec![10.0, 2001.0, 40.0],
        (2, 1) => vec![6.0, 2049.0, 60.0],
        (1, 2) => vec![30.0, 2049.0, 60.0],
        _ => vec![14.0, 2049.0, 60.0],
    }
}

#[wasm_bindgen]
pub struct Explorer {
    basis: Arc<SpectralBasis>,
}

impl Explorer {
    pub fn try_new(k: u32, l: u32, domain_l: f64, grid_n: usize, modes: usize) -> Result<Explorer, String> {
        let spec = OscillatorSpec::new(k, l, domain_l, grid_n, modes);
        let basis = SpectralBasis::solve(&spec).map_err(|e| e.to_string())?;
        Ok(Explorer { basis: Arc::new(basis) })
    }

    pub fn try_eigenfunction(&self, j: usize) -> Result<Vec<f64>, String> {
        if j >= self.basis.trusted() {
            return Err(format!(
                "mode {} is not trusted (J_ok = {})",
                j + 1,
                self.basis.trusted()
            ));
        }
        Ok(self.basis.eigenfunction(j).to_vec())
    }

    /// `e^{-tA} f` for the box indicator `f = 1` on `|x - center| ≤ width`,
    /// followed by its `L²` norm.
    pub fn try_heat(&self, center: f64, width: f64, t: f64) -> Result<Vec<f64>, String> {
        if width.is_nan() || width <= 0.0 || t.is_nan() || t < 0.0 {
            return Err("width must be positive and t non-negative".into());
        }
        let values: Vec<f64> = self
            .basis
            .grid()
            .axis()
            .iter()
            .map(|x| if (x - center).abs() <= width { 1.0 } else { 0.0 })
            .collect();
        let f = GridFunction::from_real(self.basis.clone(), &values).map_err(|e| e.to_string())?;
        let u = heat(t, &f).map_err(|e| e.to_string())?;
        let norm = lp_norm(&u, 2.0).map_err(|e| e.to_string())?;
        let mut out: Vec<f64> = u.values().iter().map(|z| z.re).collect();
        out.push(norm);
        Ok(out)
    }

    /// Least-squares slope of `log N(λ_j)` against `log λ_j` over the top
    /// three octaves of the trusted spectrum.
    pub fn try_weyl_slope(&self) -> Result<f64, String> {
        let top = self.basis.max_trusted_eigenvalue();
        let (x, y): (Vec<f64>, Vec<f64>) = self
            .basis
            .trusted_eigenvalues()
            .iter()
            .enumerate()
            .filter(|(_, lam)| **lam >= top / 8.0)
            .map(|(j, lam)| (*lam, (j + 1) as f64))
            .unzip();
        fit_log_log(&x, &y)
            .map(|f| f.slope)
            .ok_or_else(|| "too few trusted modes for a slope".to_string())
    }
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(constructor)]
    pub fn new(k: u32, l: u32, domain_l: f64, grid_n: usize, modes: usize) -> Result<Explorer, JsError> {
        Self::try_new(k, l, domain_l, grid_n, modes).map_err(js)
    }

    /// Grid nodes `x_i`, endpoints included.
    pub fn grid(&self) -> Vec<f64> {
        self.basis.grid().axis().to_vec()
    }

    pub fn trusted(&self) -> usize {
        self.basis.trusted()
    }

    /// Trusted eigenvalues; also the jump points of the counting function.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.basis.trusted_eigenvalues().to_vec()
    }

    /// Normalized `u_{j+1}` on the grid.
    pub fn eigenfunction(&self, j: usize) -> Result<Vec<f64>, JsError> {
        self.try_eigenfunction(j).map_err(js)
    }

    pub fn heat(&self, center: f64, width: f64, t: f64) -> Result<Vec<f64>, JsError> {
        self.try_heat(center, width, t).map_err(js)
    }

    pub fn weyl_slope(&self) -> Result<f64, JsError> {
        self.try_weyl_slope().map_err(js)
    }

    /// `n (1/(2k) + 1/(2l))`.
    pub fn weyl_target(&self) -> f64 {
        let s = self.basis.spec();
        weyl_exponent(s.n, s.k, s.l)
    }
}
