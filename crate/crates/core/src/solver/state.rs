use std::sync::Arc;

use crate::error::Result;
use crate::spectral::{biot_savart, Grid, SpectralField, VelocityField};

/// Vorticity and temperature at time `t`.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub omega: SpectralField,
    pub theta: SpectralField,
    pub t: f64,
}

impl FlowState {
    pub fn new(omega: SpectralField, theta: SpectralField, t: f64) -> Result<FlowState> {
        omega.same_grid(&theta)?;
        Ok(FlowState { omega, theta, t })
    }

    pub fn zeros(grid: &Arc<Grid>) -> FlowState {
        FlowState {
            omega: SpectralField::zeros(grid),
            theta: SpectralField::zeros(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.omega.grid()
    }

    pub fn n(&self) -> usize {
        self.omega.n()
    }

    pub fn velocity(&self) -> VelocityField {
        biot_savart(&self.omega)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.omega.is_finite() && self.theta.is_finite()
    }

    /// Spectral restriction or padding of both fields onto `grid`.
    pub fn resample(&self, grid: &Arc<Grid>) -> FlowState {
        FlowState {
            omega: self.omega.resample(grid),
            theta: self.theta.resample(grid),
            t: self.t,
        }
    }

    /// Re-imposes the representation invariants: Hermitian symmetry, the
    /// dealiasing mask and a zero-mean vorticity.
    pub fn enforce(&mut self) {
        for f in [&mut self.omega, &mut self.theta] {
            f.symmetrize();
            f.dealias();
        }
        self.omega.coeffs_mut()[0] = num_complex::Complex64::new(0.0, 0.0);
    }
}
