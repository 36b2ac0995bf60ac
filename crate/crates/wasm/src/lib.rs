//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each exported function has a plain-Rust twin returning `Result<_, String>`
//! so the logic is testable off the browser.

use bsq_core::diagnostics::{beta_star, regime_classify};
use bsq_core::harmonic::DyadicBank;
use bsq_core::solver::{make_initial_data, FlowState, InitKind, SolverConfig, Stepper};
use bsq_core::spectral::{l2_norm, random_field, Grid, SpectralField};
use wasm_bindgen::prelude::*;

fn js(e: String) -> JsError {
    JsError::new(&e)
}

pub fn classify_text(alpha: f64, beta: f64) -> Result<String, String> {
    regime_classify(alpha, beta)
        .map(|r| r.to_string())
        .map_err(|e| e.to_string())
}

/// Regime line for `(alpha, beta)`, e.g. `SUBCRITICAL, beta*=0.6, COVERED`.
#[wasm_bindgen]
pub fn classify(alpha: f64, beta: f64) -> Result<String, JsError> {
    classify_text(alpha, beta).map_err(js)
}

/// `beta*` sampled at `samples` interior points of `(0, 1)`, as `[alpha, beta*, ...]`.
#[wasm_bindgen]
pub fn beta_star_curve(samples: usize) -> Vec<f64> {
    (1..=samples)
        .flat_map(|i| {
            let a = i as f64 / (samples + 1) as f64;
            [a, beta_star(a).unwrap_or(f64::NAN)]
        })
        .collect()
}

/// Diverging blue-white-red map of `values` scaled by `max |values|`.
pub fn to_rgba(values: &[f64]) -> Vec<u8> {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::with_capacity(4 * values.len());
    for &v in values {
        let x = if scale > 0.0 { (v / scale).clamp(-1.0, 1.0) } else { 0.0 };
        let (r, g, b) = if x >= 0.0 {
            (1.0, 1.0 - x, 1.0 - x)
        } else {
            (1.0 + x, 1.0 + x, 1.0)
        };
        out.extend([(255.0 * r) as u8, (255.0 * g) as u8, (255.0 * b) as u8, 255]);
    }
    out
}

/// A running simulation whose fields can be drawn into a canvas.
#[wasm_bindgen]
pub struct Simulation {
    stepper: Stepper,
    state: FlowState,
    cfg: SolverConfig,
}

impl Simulation {
    pub fn create(alpha: f64, beta: f64, n: usize, dt: f64, seed: u64, kind: &str) -> Result<Simulation, String> {
        let kind: InitKind = kind.parse()?;
        let mut cfg = SolverConfig::new(alpha, beta, n, dt, dt);
        cfg.seed = seed;
        cfg.validate().map_err(|e| e.to_string())?;
        let grid = Grid::new(n).map_err(|e| e.to_string())?;
        let state = make_initial_data(kind, &grid, seed, 1.0);
        let stepper = Stepper::new(&cfg).map_err(|e| e.to_string())?;
        Ok(Simulation { stepper, state, cfg })
    }

    pub fn advance(&mut self, steps: usize) -> Result<f64, String> {
        for _ in 0..steps {
            let t = self.state.t + self.cfg.dt;
            self.state = self.stepper.step(&self.state).map_err(|e| e.to_string())?;
            self.state.t = t;
        }
        Ok(self.state.t)
    }

    pub fn field(&self, name: &str) -> Result<&SpectralField, String> {
        match name {
            "omega" => Ok(&self.state.omega),
            "theta" => Ok(&self.state.theta),
            other => Err(format!("unknown field `{other}`")),
        }
    }
}

#[wasm_bindgen]
impl Simulation {
    /// `kind` is `taylor_green`, `random_smooth` or `shear_bubble`.
    #[wasm_bindgen(constructor)]
    pub fn new(alpha: f64, beta: f64, n: usize, dt: f64, seed: u64, kind: &str) -> Result<Simulation, JsError> {
        Simulation::create(alpha, beta, n, dt, seed, kind).map_err(js)
    }

    /// Takes `steps` steps and returns the new time.
    pub fn step(&mut self, steps: usize) -> Result<f64, JsError> {
        self.advance(steps).map_err(js)
    }

    pub fn time(&self) -> f64 {
        self.state.t
    }

    pub fn size(&self) -> usize {
        self.state.n()
    }

    /// `[||omega||_2, ||theta||_2]`
    pub fn norms(&self) -> Vec<f64> {
        vec![l2_norm(&self.state.omega), l2_norm(&self.state.theta)]
    }

    /// RGBA pixels of `omega` or `theta`, rows bottom to top along `x2`.
    pub fn rgba(&self, name: &str) -> Result<Vec<u8>, JsError> {
        Ok(to_rgba(&self.field(name).map_err(js)?.to_physical()))
    }
}

/// Block `j` of a random field: pixels and the `L^2` norms of every block.
pub fn block_view(n: usize, seed: u64, j: i32) -> Result<(Vec<u8>, Vec<f64>), String> {
    let grid = Grid::new(n).map_err(|e| e.to_string())?;
    let bank = DyadicBank::new(&grid).map_err(|e| e.to_string())?;
    let f = random_field(&grid, seed, (n as i64 - 1) / 3, |k| (1.0 + k * k).powf(-0.5));
    let block = bank.block(&f, j).map_err(|e| e.to_string())?;
    let norms = bank
        .blocks()
        .map(|k| bank.block(&f, k).map(|b| l2_norm(&b)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok((to_rgba(&block.to_physical()), norms))
}

/// RGBA pixels of `Delta_j f` for a random `f` on an `n x n` grid.
#[wasm_bindgen]
pub fn lp_block_rgba(n: usize, seed: u64, j: i32) -> Result<Vec<u8>, JsError> {
    block_view(n, seed, j).map(|v| v.0).map_err(js)
}

/// `||Delta_j f||_2` for `j = -1..=j_max`.
#[wasm_bindgen]
pub fn lp_block_norms(n: usize, seed: u64) -> Result<Vec<f64>, JsError> {
    block_view(n, seed, -1).map(|v| v.1).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explorer() {
        assert_eq!(classify_text(0.8, 0.7).unwrap(), "SUBCRITICAL, beta*=0.6, COVERED");
        assert!(classify_text(1.5, 0.5).is_err());
        let c = beta_star_curve(9);
        assert_eq!(c.len(), 18);
        assert!(c.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn simulation_advances_and_draws() {
        let mut s = Simulation::create(0.8, 0.7, 32, 0.01, 1, "random_smooth").unwrap();
        let e0 = l2_norm(&s.state.theta);
        let t = s.advance(10).unwrap();
        assert!((t - 0.1).abs() < 1e-12);
        assert!(l2_norm(&s.state.theta) < e0);
        assert_eq!(to_rgba(&s.field("theta").unwrap().to_physical()).len(), 4 * 32 * 32);
        assert!(s.field("psi").is_err());
        assert!(Simulation::create(0.8, 0.7, 32, 0.01, 1, "vortex").is_err());
    }

    #[test]
    fn block_viewer() {
        let (px, norms) = block_view(64, 3, 2).unwrap();
        assert_eq!(px.len(), 4 * 64 * 64);
        assert_eq!(norms.len(), 6);
        assert!(block_view(64, 3, 9).is_err());
    }

    #[test]
    fn colour_map_endpoints() {
        let px = to_rgba(&[-2.0, 0.0, 2.0]);
        assert_eq!(&px[0..4], &[0, 0, 255, 255]);
        assert_eq!(&px[4..8], &[255, 255, 255, 255]);
        assert_eq!(&px[8..12], &[255, 0, 0, 255]);
    }
}
