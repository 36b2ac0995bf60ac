use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::field::SpectralField;
use super::grid::Grid;

/// Random real field with Gaussian coefficients of standard deviation
/// `envelope(|k|)` on the modes `max(|k1|, |k2|) <= kmax`.
///
/// Modes are drawn in a fixed order that does not depend on the grid, so the
/// same seed gives the same function on every grid; modes a grid cannot keep
/// under its dealiasing mask are dropped. The zero mode is left at zero.
pub fn random_field(grid: &Arc<Grid>, seed: u64, kmax: i64, envelope: impl Fn(f64) -> f64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(grid);
    for k2 in -kmax..=kmax {
        for k1 in 0..=kmax {
            if k1 == 0 && k2 <= 0 {
                continue;
            }
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            let amp = envelope(((k1 * k1 + k2 * k2) as f64).sqrt());
            let c = Complex64::new(re, im) * (amp / std::f64::consts::SQRT_2);
            if let (Some(i), Some(j)) = (grid.index_of(k1, k2), grid.index_of(-k1, -k2)) {
                if grid.is_retained(i) {
                    f.coeffs_mut()[i] = c;
                    f.coeffs_mut()[j] = c.conj();
                }
            }
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_function_on_every_grid() {
        let a = random_field(&Grid::new(32).unwrap(), 7, 6, |k| (-k * k / 9.0).exp());
        let b = random_field(&Grid::new(64).unwrap(), 7, 6, |k| (-k * k / 9.0).exp());
        assert!(a.resample(b.grid()).rel_diff(&b) == 0.0);
        assert!(a.hermitian_residual() == 0.0);
        assert_eq!(a.mean(), 0.0);
    }

    #[test]
    fn seeds_differ() {
        let g = Grid::new(16).unwrap();
        let a = random_field(&g, 1, 4, |_| 1.0);
        let b = random_field(&g, 2, 4, |_| 1.0);
        assert!(a.rel_diff(&b) > 0.1);
    }
}
