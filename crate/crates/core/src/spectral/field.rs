use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Real scalar field on a periodic grid, held as Fourier-series coefficients
/// `f(x) = sum_k c_k exp(i k.x)`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![ZERO; grid.len()],
        }
    }

    /// Wraps raw coefficients. The caller is responsible for Hermitian symmetry.
    pub fn from_coeffs(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Transforms row-major physical samples. The Nyquist rows are dropped.
    pub fn from_physical(grid: &Arc<Grid>, values: &[f64]) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        let mut coeffs: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.forward(&mut coeffs);
        let mut f = SpectralField {
            grid: grid.clone(),
            coeffs,
        };
        f.zero_nyquist();
        Ok(f)
    }

    /// Samples `func(x1, x2)` on the grid.
    pub fn from_fn(grid: &Arc<Grid>, func: impl Fn(f64, f64) -> f64) -> Self {
        let values: Vec<f64> = (0..grid.len())
            .map(|idx| {
                let (x1, x2) = grid.point(idx);
                func(x1, x2)
            })
            .collect();
        Self::from_physical(grid, &values).expect("length matches grid")
    }

    /// Field built from explicit `(mode, coefficient)` pairs, summed.
    pub fn from_modes(grid: &Arc<Grid>, modes: &[((i64, i64), Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(grid);
        for &((k1, k2), c) in modes {
            let idx = grid
                .index_of(k1, k2)
                .ok_or_else(|| crate::error::invalid("mode", format!("({k1},{k2}) not representable")))?;
            f.coeffs[idx] += c;
        }
        Ok(f)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of mode `(k1, k2)`; zero when not representable.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.grid.index_of(k1, k2).map_or(ZERO, |i| self.coeffs[i])
    }

    /// Row-major physical values.
    pub fn to_physical(&self) -> Vec<f64> {
        let mut buf = self.coeffs.clone();
        self.grid.inverse(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid.n() != other.grid.n() {
            return Err(Error::GridMismatch(self.grid.n(), other.grid.n()));
        }
        Ok(())
    }

    /// Applies the multiplier `m(k1, k2)` mode by mode.
    pub fn map_modes(&self, m: impl Fn(i64, i64) -> Complex64) -> SpectralField {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| {
                if c == ZERO {
                    return ZERO;
                }
                let (k1, k2) = self.grid.mode(idx);
                c * m(k1, k2)
            })
            .collect();
        SpectralField {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Real-valued multiplier `m(k1, k2)`.
    pub fn map_real(&self, m: impl Fn(i64, i64) -> f64) -> SpectralField {
        self.map_modes(|k1, k2| Complex64::new(m(k1, k2), 0.0))
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> SpectralField {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &SpectralField) -> Result<SpectralField> {
        self.zip(other, |a, b| a + b * s)
    }

    fn zip(&self, other: &SpectralField, op: impl Fn(Complex64, Complex64) -> Complex64) -> Result<SpectralField> {
        self.same_grid(other)?;
        Ok(SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    /// Zeroes every mode outside the two-thirds mask.
    pub fn dealias(&mut self) {
        let mask = self.grid.dealias_mask();
        for (c, &keep) in self.coeffs.iter_mut().zip(mask) {
            if !keep {
                *c = ZERO;
            }
        }
    }

    pub fn dealiased(&self) -> SpectralField {
        let mut f = self.clone();
        f.dealias();
        f
    }

    fn zero_nyquist(&mut self) {
        let n = self.grid.n();
        let h = n / 2;
        for c in 0..n {
            self.coeffs[h * n + c] = ZERO;
            self.coeffs[c * n + h] = ZERO;
        }
    }

    /// Replaces the coefficients by their Hermitian part, so the physical
    /// field is exactly real. Nyquist rows are zeroed.
    pub fn symmetrize(&mut self) {
        let g = self.grid.clone();
        let old = self.coeffs.clone();
        for idx in 0..old.len() {
            let (k1, k2) = g.mode(idx);
            match g.index_of(-k1, -k2) {
                Some(j) => self.coeffs[idx] = 0.5 * (old[idx] + old[j].conj()),
                None => self.coeffs[idx] = ZERO,
            }
        }
        self.zero_nyquist();
    }

    /// `max |c(k) - conj c(-k)|` relative to `max |c|`.
    pub fn hermitian_residual(&self) -> f64 {
        let scale = self.max_coeff();
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for idx in 0..self.coeffs.len() {
            let (k1, k2) = self.grid.mode(idx);
            let partner = self.grid.index_of(-k1, -k2).map_or(ZERO, |j| self.coeffs[j]);
            worst = worst.max((self.coeffs[idx] - partner.conj()).norm());
        }
        worst / scale
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `sum_k |c_k|^2`
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Spectral restriction or zero-padding onto another grid. Modes that do
    /// not fit on the target (including its Nyquist rows) are dropped.
    pub fn resample(&self, target: &Arc<Grid>) -> SpectralField {
        let mut out = SpectralField::zeros(target);
        let half = (target.n() / 2) as i64;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            let (k1, k2) = self.grid.mode(idx);
            if k1 == -half || k2 == -half {
                continue;
            }
            if let Some(j) = target.index_of(k1, k2) {
                out.coeffs[j] = c;
            }
        }
        out
    }

    /// Maximum relative coefficient difference against `other`.
    pub fn rel_diff(&self, other: &SpectralField) -> f64 {
        let scale = self.max_coeff().max(other.max_coeff());
        if scale == 0.0 {
            return 0.0;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_has_two_coefficients() {
        let g = Grid::new(16).unwrap();
        let f = SpectralField::from_fn(&g, |x1, _| x1.sin());
        assert!((f.coeff(1, 0) - Complex64::new(0.0, -0.5)).norm() < 1e-15);
        assert!((f.coeff(-1, 0) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(f.hermitian_residual() < 1e-14);
    }

    #[test]
    fn resample_keeps_low_modes() {
        let g16 = Grid::new(16).unwrap();
        let g32 = Grid::new(32).unwrap();
        let f = SpectralField::from_fn(&g16, |x1, x2| (2.0 * x1).cos() * x2.sin());
        let up = f.resample(&g32);
        let back = up.resample(&g16);
        assert!(back.rel_diff(&f) < 1e-15);
        let direct = SpectralField::from_fn(&g32, |x1, x2| (2.0 * x1).cos() * x2.sin());
        assert!(up.rel_diff(&direct) < 1e-14);
    }

    #[test]
    fn length_mismatch_is_reported() {
        let g = Grid::new(8).unwrap();
        assert!(matches!(
            SpectralField::from_physical(&g, &[0.0; 3]),
            Err(Error::LengthMismatch { expected: 64, got: 3 })
        ));
    }
}
