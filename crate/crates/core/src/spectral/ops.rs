//! Fourier-multiplier operators and pointwise products on [`SpectralField`]s.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{invalid, Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
fn modulus(k1: i64, k2: i64) -> f64 {
    ((k1 * k1 + k2 * k2) as f64).sqrt()
}

/// Velocity pair `(u1, u2)`.
#[derive(Clone, Debug)]
pub struct VelocityField {
    pub u1: SpectralField,
    pub u2: SpectralField,
}

impl VelocityField {
    pub fn zeros(grid: &std::sync::Arc<Grid>) -> Self {
        VelocityField {
            u1: SpectralField::zeros(grid),
            u2: SpectralField::zeros(grid),
        }
    }

    pub fn add(&self, other: &VelocityField) -> Result<VelocityField> {
        Ok(VelocityField {
            u1: self.u1.add(&other.u1)?,
            u2: self.u2.add(&other.u2)?,
        })
    }

    /// `max_k |k1 u1(k) + k2 u2(k)|` relative to the largest coefficient.
    pub fn divergence_residual(&self) -> f64 {
        let g = self.u1.grid();
        let scale = self.u1.max_coeff().max(self.u2.max_coeff());
        if scale == 0.0 {
            return 0.0;
        }
        let (a, b) = (self.u1.coeffs(), self.u2.coeffs());
        (0..g.len())
            .map(|idx| {
                let (k1, k2) = g.mode(idx);
                (a[idx] * k1 as f64 + b[idx] * k2 as f64).norm()
            })
            .fold(0.0, f64::max)
            / scale
    }

    /// Scalar curl `d1 u2 - d2 u1`.
    pub fn curl(&self) -> Result<SpectralField> {
        let d1u2 = partial(&self.u2, 1);
        let d2u1 = partial(&self.u1, 2);
        d1u2.sub(&d2u1)
    }

    /// `(||u1||^2 + ||u2||^2)^(1/2)` in L^2.
    pub fn l2_norm(&self) -> f64 {
        (l2_norm(&self.u1).powi(2) + l2_norm(&self.u2).powi(2)).sqrt()
    }

    /// L^p norm of the pointwise Euclidean magnitude `|u(x)|`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        let a = self.u1.to_physical();
        let b = self.u2.to_physical();
        let mag: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.hypot(*y)).collect();
        lp_of_samples(&mag, self.u1.n(), p)
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite()
    }
}

/// `Lambda^s f`: multiplies mode `k` by `|k|^s`. The zero mode is sent to zero
/// for `s != 0` (for `s < 0` this is the mean projection).
pub fn fractional_laplacian(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if !s.is_finite() {
        return Err(invalid("s", format!("exponent must be finite, got {s}")));
    }
    if s == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_real(|k1, k2| {
        if k1 == 0 && k2 == 0 {
            0.0
        } else {
            modulus(k1, k2).powf(s)
        }
    }))
}

/// As [`fractional_laplacian`], but refuses negative powers of a field whose
/// mean is not zero (relative to its largest coefficient).
pub fn fractional_laplacian_strict(f: &SpectralField, s: f64) -> Result<SpectralField> {
    if s < 0.0 {
        let mean = f.mean();
        if mean.abs() > 1e-14 * f.max_coeff().max(f64::MIN_POSITIVE) {
            return Err(Error::NonZeroMean { mean });
        }
    }
    fractional_laplacian(f, s)
}

/// `R_beta = d/dx1 Lambda^{-beta}`, multiplier `i k1 |k|^{-beta}`.
pub fn riesz_beta(theta: &SpectralField, beta: f64) -> Result<SpectralField> {
    if !(beta > 0.0 && beta < 2.0) {
        return Err(invalid("beta", format!("R_beta needs 0 < beta < 2, got {beta}")));
    }
    Ok(theta.map_modes(|k1, k2| {
        if k1 == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            I * (k1 as f64 * modulus(k1, k2).powf(-beta))
        }
    }))
}

/// `Delta^{-1}` with the zero mode projected out.
pub fn inverse_laplacian(f: &SpectralField) -> SpectralField {
    f.map_real(|k1, k2| {
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == 0 {
            0.0
        } else {
            -1.0 / k2sum as f64
        }
    })
}

/// Spectral derivative along axis 1 (x1) or 2 (x2).
pub fn partial(f: &SpectralField, axis: u8) -> SpectralField {
    f.map_modes(|k1, k2| I * if axis == 1 { k1 as f64 } else { k2 as f64 })
}

pub fn gradient(f: &SpectralField) -> (SpectralField, SpectralField) {
    (partial(f, 1), partial(f, 2))
}

/// `u = grad^perp Delta^{-1} omega` with `grad^perp = (-d2, d1)`.
pub fn biot_savart(omega: &SpectralField) -> VelocityField {
    let u1 = omega.map_modes(|k1, k2| {
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            I * (k2 as f64 / k2sum as f64)
        }
    });
    let u2 = omega.map_modes(|k1, k2| {
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            -I * (k1 as f64 / k2sum as f64)
        }
    });
    VelocityField { u1, u2 }
}

/// Splits the velocity of `omega = G + R_beta theta` into `(u_G, u_theta)`.
pub fn velocity_split(g: &SpectralField, theta: &SpectralField, beta: f64) -> Result<(VelocityField, VelocityField)> {
    g.same_grid(theta)?;
    let u_g = biot_savart(g);
    let u_theta = biot_savart(&riesz_beta(theta, beta)?);
    Ok((u_g, u_theta))
}

/// Pseudo-spectral product with the two-thirds rule on inputs and output.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.same_grid(g)?;
    let a = f.dealiased().to_physical();
    let b = g.dealiased().to_physical();
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    let mut out = SpectralField::from_physical(f.grid(), &prod)?;
    out.dealias();
    Ok(out)
}

/// Sum of dealiased products `sum_i a_i b_i` with a single forward transform.
pub fn dealiased_dot(pairs: &[(&SpectralField, &SpectralField)]) -> Result<SpectralField> {
    let first = pairs.first().ok_or_else(|| invalid("pairs", "empty product list"))?.0;
    let grid = first.grid().clone();
    let mut acc = vec![0.0; grid.len()];
    for (a, b) in pairs {
        a.same_grid(first)?;
        b.same_grid(first)?;
        let pa = a.dealiased().to_physical();
        let pb = b.dealiased().to_physical();
        for ((s, x), y) in acc.iter_mut().zip(&pa).zip(&pb) {
            *s += x * y;
        }
    }
    let mut out = SpectralField::from_physical(&grid, &acc)?;
    out.dealias();
    Ok(out)
}

/// `u . grad f` with dealiased products.
pub fn advect(u: &VelocityField, f: &SpectralField) -> Result<SpectralField> {
    let (fx, fy) = gradient(f);
    dealiased_dot(&[(&u.u1, &fx), (&u.u2, &fy)])
}

/// Product computed without truncation on a grid twice as fine, returned on
/// that fine grid. Exact for inputs supported in `|k_i| < N/2`.
pub fn exact_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.same_grid(g)?;
    let fine = Grid::new(2 * f.n())?;
    let a = f.resample(&fine).to_physical();
    let b = g.resample(&fine).to_physical();
    let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    SpectralField::from_physical(&fine, &prod)
}

/// Largest grid value of `|f|`.
pub fn physical_max_abs(f: &SpectralField) -> f64 {
    f.to_physical().iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Equispaced-quadrature L^p norm on the torus; `p = inf` is the grid maximum.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    lp_of_samples(&f.to_physical(), f.n(), p)
}

/// L^p norm of row-major samples on the N x N torus grid.
pub fn lp_of_samples(values: &[f64], n: usize, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(invalid("p", format!("L^p needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let cell = (2.0 * PI / n as f64).powi(2);
    let sum: f64 = if p == 2.0 {
        values.iter().map(|v| v * v).sum()
    } else {
        values.iter().map(|v| v.abs().powf(p)).sum()
    };
    Ok((cell * sum).powf(1.0 / p))
}

/// L^2 norm via Parseval: `(2pi)^2 sum |c_k|^2`.
pub fn l2_norm(f: &SpectralField) -> f64 {
    (4.0 * PI * PI * f.energy()).sqrt()
}

/// `||Lambda^s f||_{L^2}` computed from the coefficients.
pub fn homogeneous_l2(f: &SpectralField, s: f64) -> f64 {
    let g = f.grid();
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(idx, c)| *idx != 0 && c.norm_sqr() > 0.0)
        .map(|(idx, c)| {
            let (k1, k2) = g.mode(idx);
            ((k1 * k1 + k2 * k2) as f64).powf(s) * c.norm_sqr()
        })
        .sum();
    let zero = if s == 0.0 { f.coeffs()[0].norm_sqr() } else { 0.0 };
    (4.0 * PI * PI * (sum + zero)).sqrt()
}

/// Supremum of `|f|` over the torus, not just the grid: grid local maxima
/// close to the grid maximum are polished with Newton steps on the
/// trigonometric polynomial.
pub fn sup_norm(f: &SpectralField) -> f64 {
    let n = f.n();
    let values = f.to_physical();
    let grid_max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if grid_max == 0.0 {
        return 0.0;
    }
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let v = values[r * n + c].abs();
            if v < 0.9 * grid_max {
                continue;
            }
            let mut local = true;
            'nb: for dr in [n - 1, 0, 1] {
                for dc in [n - 1, 0, 1] {
                    if (dr, dc) != (0, 0) && values[((r + dr) % n) * n + (c + dc) % n].abs() > v {
                        local = false;
                        break 'nb;
                    }
                }
            }
            if local {
                candidates.push((r * n + c, v));
            }
        }
    }
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1));
    candidates.truncate(8);
    let eval = PointEvaluator::new(f);
    let mut best = grid_max;
    for (idx, _) in candidates {
        let (x1, x2) = f.grid().point(idx);
        best = best.max(eval.polish_extremum(x1, x2, f.grid().spacing()));
    }
    best
}

/// Newton step `-H^+ d` for a symmetric 2x2 Hessian, ignoring directions of
/// negligible curvature.
fn newton_step(d: [f64; 2], h: [f64; 3]) -> (f64, f64) {
    let (a, b, c) = (h[0], h[1], h[2]);
    let mean = 0.5 * (a + c);
    let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let lams = [mean + rad, mean - rad];
    let tol = 1e-12 * lams[0].abs().max(lams[1].abs());
    let mut step = (0.0, 0.0);
    for lam in lams {
        if lam.abs() <= tol {
            continue;
        }
        // eigenvector of [[a, b], [b, c]] for lam
        let (vx, vy) = if b.abs() > 0.0 {
            (lam - c, b)
        } else if (lam - a).abs() <= (lam - c).abs() {
            (1.0, 0.0)
        } else {
            (0.0, 1.0)
        };
        let norm = vx.hypot(vy);
        if norm == 0.0 {
            continue;
        }
        let (vx, vy) = (vx / norm, vy / norm);
        let proj = (vx * d[0] + vy * d[1]) / lam;
        step.0 -= proj * vx;
        step.1 -= proj * vy;
    }
    step
}

/// Direct evaluation of a band-limited field and its derivatives at
/// arbitrary points.
pub struct PointEvaluator {
    modes: Vec<(f64, f64, Complex64)>,
}

impl PointEvaluator {
    pub fn new(f: &SpectralField) -> Self {
        let g = f.grid();
        let modes = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(idx, &c)| {
                let (k1, k2) = g.mode(idx);
                (k1 as f64, k2 as f64, c)
            })
            .collect();
        PointEvaluator { modes }
    }

    /// Value, gradient and Hessian `(f, [f1, f2], [f11, f12, f22])` at `(x1, x2)`.
    pub fn jet(&self, x1: f64, x2: f64) -> (f64, [f64; 2], [f64; 3]) {
        let mut v = 0.0;
        let mut d = [0.0; 2];
        let mut h = [0.0; 3];
        for &(k1, k2, c) in &self.modes {
            let e = c * Complex64::from_polar(1.0, k1 * x1 + k2 * x2);
            let (re, im) = (e.re, e.im);
            v += re;
            d[0] -= k1 * im;
            d[1] -= k2 * im;
            h[0] -= k1 * k1 * re;
            h[1] -= k1 * k2 * re;
            h[2] -= k2 * k2 * re;
        }
        (v, d, h)
    }

    pub fn value(&self, x1: f64, x2: f64) -> f64 {
        self.jet(x1, x2).0
    }

    /// Newton iteration for a local extremum of `f` started at a grid point;
    /// returns the best `|f|` encountered. Steps are capped at one grid cell.
    pub fn polish_extremum(&self, x1: f64, x2: f64, h: f64) -> f64 {
        let (mut x, mut y) = (x1, x2);
        let (v0, _, _) = self.jet(x, y);
        let mut best = v0.abs();
        for _ in 0..20 {
            let (_, d, hs) = self.jet(x, y);
            let (mut sx, mut sy) = newton_step(d, hs);
            let len = sx.hypot(sy);
            if len > h {
                sx *= h / len;
                sy *= h / len;
            }
            x += sx;
            y += sy;
            best = best.max(self.value(x, y).abs());
            if len < 1e-13 {
                break;
            }
        }
        best
    }
}
