use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::FlowState;
use crate::spectral::{l2_norm, random_field, Grid, SpectralField};

/// Spectral width of `random_smooth` data: coefficient spread `exp(-|k|^2/XI0^2)`.
pub const XI0: f64 = 3.0;
const RANDOM_KMAX: i64 = 12;
const BUBBLE_WIDTH: f64 = 0.6;
const BUBBLE_KMAX: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    TaylorGreen,
    RandomSmooth,
    ShearBubble,
}

impl std::str::FromStr for InitKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "taylor_green" => Ok(InitKind::TaylorGreen),
            "random_smooth" => Ok(InitKind::RandomSmooth),
            "shear_bubble" => Ok(InitKind::ShearBubble),
            other => Err(format!("unknown initial data kind `{other}`")),
        }
    }
}

/// Smooth random field with RMS value `amplitude`. The same seed gives the
/// same function on every grid (truncated on grids too coarse for it).
pub fn smooth_random(grid: &Arc<Grid>, seed: u64, amplitude: f64) -> SpectralField {
    let reference = Grid::new(grid.n().max(64)).expect("valid reference grid");
    let f = random_field(&reference, seed, RANDOM_KMAX, |k| (-k * k / (XI0 * XI0)).exp());
    let rms = l2_norm(&f) / (2.0 * PI);
    let f = if rms > 0.0 { f.scale(amplitude / rms) } else { f };
    f.resample(grid)
}

/// Periodized Gaussian of width `sigma` centred at `(c1, c2)`, built from its
/// Fourier series and scaled to peak value `amplitude`.
pub fn gaussian_bump(grid: &Arc<Grid>, center: (f64, f64), sigma: f64, amplitude: f64) -> SpectralField {
    let mut modes = Vec::new();
    let mut peak = 0.0;
    for k2 in -BUBBLE_KMAX..=BUBBLE_KMAX {
        for k1 in -BUBBLE_KMAX..=BUBBLE_KMAX {
            let w = (-0.5 * sigma * sigma * (k1 * k1 + k2 * k2) as f64).exp();
            peak += w;
            let phase = -(k1 as f64 * center.0 + k2 as f64 * center.1);
            modes.push(((k1, k2), Complex64::from_polar(w, phase)));
        }
    }
    let mut f = SpectralField::zeros(grid);
    let scale = amplitude / peak;
    for ((k1, k2), c) in modes {
        if let Some(idx) = grid.index_of(k1, k2) {
            if grid.is_retained(idx) {
                f.coeffs_mut()[idx] = c * scale;
            }
        }
    }
    f.symmetrize();
    f
}

pub fn make_initial_data(kind: InitKind, grid: &Arc<Grid>, seed: u64, amplitude: f64) -> FlowState {
    let (omega, theta) = match kind {
        InitKind::TaylorGreen => {
            let mut w = SpectralField::from_fn(grid, |x1, x2| amplitude * x1.sin() * x2.sin());
            w.dealias();
            (w, SpectralField::zeros(grid))
        }
        InitKind::RandomSmooth => (
            smooth_random(grid, seed, amplitude),
            smooth_random(grid, seed ^ 0x9e37_79b9_7f4a_7c15, amplitude),
        ),
        InitKind::ShearBubble => (
            SpectralField::zeros(grid),
            gaussian_bump(grid, (PI, 0.5 * PI), BUBBLE_WIDTH, amplitude),
        ),
    };
    let mut state = FlowState { omega, theta, t: 0.0 };
    state.enforce();
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::sobolev_norm;
    use crate::spectral::physical_max_abs;

    #[test]
    fn taylor_green_formula() {
        let g = Grid::new(16).unwrap();
        let s = make_initial_data(InitKind::TaylorGreen, &g, 0, 1.0);
        let direct = SpectralField::from_fn(&g, |x1, x2| x1.sin() * x2.sin());
        assert!(s.omega.rel_diff(&direct) < 1e-15);
        assert_eq!(s.theta.max_coeff(), 0.0);
    }

    #[test]
    fn random_smooth_is_deterministic_and_grid_independent() {
        let g = Grid::new(64).unwrap();
        let a = make_initial_data(InitKind::RandomSmooth, &g, 5, 1.0);
        let b = make_initial_data(InitKind::RandomSmooth, &g, 5, 1.0);
        assert_eq!(a.omega.coeffs(), b.omega.coeffs());
        assert_eq!(a.theta.coeffs(), b.theta.coeffs());
        let fine = make_initial_data(InitKind::RandomSmooth, &Grid::new(128).unwrap(), 5, 1.0);
        assert!(a.omega.resample(fine.grid()).rel_diff(&fine.omega) < 1e-15);
        assert!((l2_norm(&a.omega) / (2.0 * PI) - 1.0).abs() < 1e-12);
        assert!(a.omega.rel_diff(&a.theta) > 0.1);
    }

    #[test]
    fn bubble_peak_and_invariants() {
        let g = Grid::new(64).unwrap();
        let s = make_initial_data(InitKind::ShearBubble, &g, 0, 2.0);
        assert_eq!(s.omega.max_coeff(), 0.0);
        assert!((physical_max_abs(&s.theta) - 2.0).abs() < 1e-3);
        assert!(s.theta.mean() > 0.0);
        assert!(s.theta.hermitian_residual() < 1e-15);
    }

    #[test]
    fn every_kind_is_smooth_with_zero_mean_vorticity() {
        let g = Grid::new(32).unwrap();
        for kind in [InitKind::TaylorGreen, InitKind::RandomSmooth, InitKind::ShearBubble] {
            let s = make_initial_data(kind, &g, 3, 1.0);
            assert!(sobolev_norm(&s.theta, 2.5).is_finite());
            assert_eq!(s.omega.mean(), 0.0);
        }
    }
}
