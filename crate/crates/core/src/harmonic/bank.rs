use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

const INNER: f64 = 0.75;
const OUTER: f64 = 4.0 / 3.0;

fn mollifier_tail(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Radial cutoff `chi`: identically 1 on `|xi| <= 3/4`, 0 on `|xi| >= 4/3`,
/// smooth in between (ratio of `exp(-1/x)` bumps).
pub fn chi(r: f64) -> f64 {
    if r <= INNER {
        return 1.0;
    }
    if r >= OUTER {
        return 0.0;
    }
    let t = (r - INNER) / (OUTER - INNER);
    let a = mollifier_tail(1.0 - t);
    let b = mollifier_tail(t);
    a / (a + b)
}

/// `phi(xi) = chi(xi / 2) - chi(xi)`, supported in `3/4 <= |xi| <= 8/3`.
pub fn phi(r: f64) -> f64 {
    chi(0.5 * r) - chi(r)
}

/// Inhomogeneous Littlewood-Paley multipliers for one grid.
///
/// Block `-1` is `chi(D)`, blocks `0..j_max` are `phi(2^-j D)`. The top block
/// `j_max` is `1 - chi(2^-j_max D)`, i.e. it also absorbs the corner modes
/// of the square dealiasing region that lie beyond `3/4 * 2^(j_max+1)`, so the
/// weights sum to one on every mode.
#[derive(Clone, Debug)]
pub struct DyadicBank {
    grid: Arc<Grid>,
    j_max: i32,
    weights: Vec<Vec<f64>>,
}

impl DyadicBank {
    pub fn new(grid: &Arc<Grid>) -> Result<DyadicBank> {
        let n = grid.n();
        if n < 8 {
            return Err(Error::InvalidGrid(n));
        }
        // largest j with 2^j * 3/4 <= N/3  <=>  9 * 2^j <= 4 N
        let mut j_max = 0i32;
        while 9usize << (j_max + 1) <= 4 * n {
            j_max += 1;
        }
        let radii: Vec<f64> = (0..grid.len())
            .map(|idx| {
                let (k1, k2) = grid.mode(idx);
                ((k1 * k1 + k2 * k2) as f64).sqrt()
            })
            .collect();
        let mut weights = Vec::with_capacity(j_max as usize + 2);
        weights.push(radii.iter().map(|&r| chi(r)).collect());
        for j in 0..j_max {
            let s = (-j as f64).exp2();
            weights.push(radii.iter().map(|&r| chi(0.5 * s * r) - chi(s * r)).collect());
        }
        let s = (-j_max as f64).exp2();
        weights.push(radii.iter().map(|&r| 1.0 - chi(s * r)).collect());
        Ok(DyadicBank {
            grid: grid.clone(),
            j_max,
            weights,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        -1
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Block indices `-1..=j_max`.
    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        -1..=self.j_max
    }

    /// Multiplier of block `j` on every storage index.
    pub fn weights(&self, j: i32) -> Result<&[f64]> {
        if j < -1 || j > self.j_max {
            return Err(Error::BlockOutOfRange { j, j_max: self.j_max });
        }
        Ok(&self.weights[(j + 1) as usize])
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if f.n() != self.grid.n() {
            return Err(Error::GridMismatch(self.grid.n(), f.n()));
        }
        Ok(())
    }

    /// `Delta_j f`
    pub fn block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check(f)?;
        let w = self.weights(j)?;
        let coeffs = f.coeffs().iter().zip(w).map(|(&c, &w)| c * w).collect();
        SpectralField::from_coeffs(f.grid(), coeffs)
    }

    /// `S_j f = sum_{-1 <= k <= j-1} Delta_k f`, for `-1 <= j <= j_max + 1`.
    pub fn low_pass(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check(f)?;
        if j < -1 || j > self.j_max + 1 {
            return Err(Error::BlockOutOfRange {
                j,
                j_max: self.j_max + 1,
            });
        }
        let mut w = vec![0.0; f.coeffs().len()];
        for k in -1..j {
            for (acc, &x) in w.iter_mut().zip(self.weights(k)?) {
                *acc += x;
            }
        }
        let coeffs = f.coeffs().iter().zip(&w).map(|(&c, &w)| c * w).collect();
        SpectralField::from_coeffs(f.grid(), coeffs)
    }

    /// `max_k |sum_j w_j(k) - 1|` over the modes kept by the dealiasing mask.
    pub fn partition_residual(&self) -> f64 {
        (0..self.grid.len())
            .filter(|&idx| self.grid.is_retained(idx))
            .map(|idx| (self.weights.iter().map(|w| w[idx]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}
