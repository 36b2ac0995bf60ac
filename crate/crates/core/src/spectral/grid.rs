use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform N x N grid on the periodic box [0, 2pi)^2.
///
/// Storage is row-major with the row index running along x2 and the column
/// index along x1: sample `(row, col)` sits at `x1 = col * h`, `x2 = row * h`
/// with `h = 2pi / N`. The same layout is used for Fourier coefficients, where
/// index `m` carries the integer wavenumber `m` for `m < N/2` and `m - N`
/// otherwise.
pub struct Grid {
    n: usize,
    wavenumbers: Vec<i64>,
    dealias: Vec<bool>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("n", &self.n).finish()
    }
}

static GRID_CACHE: OnceLock<Mutex<HashMap<usize, Arc<Grid>>>> = OnceLock::new();

impl Grid {
    /// Shared grid of size `n`. Grids (and their FFT plans) are cached per size.
    pub fn new(n: usize) -> Result<Arc<Grid>> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(n));
        }
        let cache = GRID_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut cache = cache.lock().unwrap_or_else(|e| e.into_inner());
        Ok(cache.entry(n).or_insert_with(|| Arc::new(Grid::build(n))).clone())
    }

    fn build(n: usize) -> Grid {
        let half = (n / 2) as i64;
        let wavenumbers: Vec<i64> = (0..n as i64).map(|m| if m < half { m } else { m - n as i64 }).collect();
        // two-thirds rule: keep max(|k1|, |k2|) < N/3, i.e. 3 max|k| < N
        let cut = n as i64;
        let mut dealias = vec![false; n * n];
        for (r, &k2) in wavenumbers.iter().enumerate() {
            for (c, &k1) in wavenumbers.iter().enumerate() {
                dealias[r * n + c] = 3 * k1.abs().max(k2.abs()) < cut && k1 != -half && k2 != -half;
            }
        }
        let mut planner = FftPlanner::new();
        Grid {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            wavenumbers,
            dealias,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Signed wavenumber carried by storage index `m` along either axis.
    pub fn wavenumber(&self, m: usize) -> i64 {
        self.wavenumbers[m]
    }

    pub fn wavenumbers(&self) -> &[i64] {
        &self.wavenumbers
    }

    /// `(k1, k2)` of flat index `idx`.
    #[inline]
    pub fn mode(&self, idx: usize) -> (i64, i64) {
        (self.wavenumbers[idx % self.n], self.wavenumbers[idx / self.n])
    }

    /// Flat index of mode `(k1, k2)`, if representable (`-N/2 <= k < N/2`).
    pub fn index_of(&self, k1: i64, k2: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        let wrap = |k: i64| -> Option<usize> {
            if k < -half || k >= half {
                None
            } else if k >= 0 {
                Some(k as usize)
            } else {
                Some((k + self.n as i64) as usize)
            }
        };
        Some(wrap(k2)? * self.n + wrap(k1)?)
    }

    /// Modes kept by the two-thirds rule; the Nyquist rows are never kept.
    pub fn dealias_mask(&self) -> &[bool] {
        &self.dealias
    }

    pub fn is_retained(&self, idx: usize) -> bool {
        self.dealias[idx]
    }

    /// Physical coordinates `(x1, x2)` of flat index `idx`.
    pub fn point(&self, idx: usize) -> (f64, f64) {
        let h = self.spacing();
        ((idx % self.n) as f64 * h, (idx / self.n) as f64 * h)
    }

    /// Physical space to Fourier-series coefficients (carries the 1/N^2 factor).
    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
        let scale = 1.0 / (self.n * self.n) as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }

    /// Fourier-series coefficients to physical values (unnormalized sum).
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        debug_assert_eq!(data.len(), n * n);
        rows(data, n, plan);
        transpose(data, n);
        rows(data, n, plan);
        transpose(data, n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in r + 1..n {
            data.swap(r * n + c, c * n + r);
        }
    }
}

#[cfg(feature = "parallel")]
fn rows(data: &mut [Complex64], n: usize, plan: &Arc<dyn Fft<f64>>) {
    use rayon::prelude::*;
    if n >= 128 && crate::fft_parallelism() {
        data.par_chunks_mut(n * 16).for_each(|block| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(block, &mut scratch);
        });
    } else {
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
    }
}

#[cfg(not(feature = "parallel"))]
fn rows(data: &mut [Complex64], n: usize, plan: &Arc<dyn Fft<f64>>) {
    let _ = n;
    let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
    plan.process_with_scratch(data, &mut scratch);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_odd() {
        assert!(Grid::new(6).is_err());
        assert!(Grid::new(9).is_err());
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn dealias_mask_is_two_thirds_rule() {
        let g = Grid::new(16).unwrap();
        for idx in 0..g.len() {
            let (k1, k2) = g.mode(idx);
            let expect = (k1.abs().max(k2.abs()) as f64) < 16.0 / 3.0;
            assert_eq!(g.is_retained(idx), expect, "mode ({k1},{k2})");
        }
        let kept = g.dealias_mask().iter().filter(|&&b| b).count();
        // |k| <= 5 on both axes
        assert_eq!(kept, 11 * 11);
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(8).unwrap();
        for idx in 0..g.len() {
            let (k1, k2) = g.mode(idx);
            assert_eq!(g.index_of(k1, k2), Some(idx));
        }
        assert_eq!(g.index_of(4, 0), None);
    }

    #[test]
    fn grids_are_shared() {
        let a = Grid::new(32).unwrap();
        let b = Grid::new(32).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
