//! Pointwise quantities and inequality ratios evaluated on single states.

use std::f64::consts::E;

use crate::error::{invalid, Result};
use crate::harmonic::{besov_norm, sobolev_norm, BesovIndex, DyadicBank};
use crate::solver::FlowState;
use crate::spectral::{
    advect, biot_savart, dealiased_product, exact_product, fractional_laplacian, gradient, l2_norm, lp_of_samples,
    partial, physical_max_abs, riesz_beta, SpectralField, VelocityField,
};

/// `G = omega - R_beta theta`
pub fn combined_quantity(state: &FlowState, beta: f64) -> Result<SpectralField> {
    state.omega.sub(&riesz_beta(&state.theta, beta)?)
}

/// `[R_beta, u.grad] theta = R_beta(u.grad theta) - u.grad(R_beta theta)`.
pub fn commutator_rbeta(u: &VelocityField, theta: &SpectralField, beta: f64) -> Result<SpectralField> {
    let first = riesz_beta(&advect(u, theta)?, beta)?;
    let second = advect(u, &riesz_beta(theta, beta)?)?;
    first.sub(&second)
}

/// The same commutator from the flux form `R_beta div(u theta) - div(u R_beta theta)`,
/// valid for divergence-free `u`.
pub fn commutator_rbeta_flux(u: &VelocityField, theta: &SpectralField, beta: f64) -> Result<SpectralField> {
    let flux_div = |f: &SpectralField| -> Result<SpectralField> {
        let a = partial(&dealiased_product(&u.u1, f)?, 1);
        let b = partial(&dealiased_product(&u.u2, f)?, 2);
        a.add(&b)
    };
    let r_theta = riesz_beta(theta, beta)?;
    let second = flux_div(&r_theta)?;
    let first = riesz_beta(&flux_div(theta)?, beta)?;
    let mut out = second.scale(-1.0);
    out = out.add(&first)?;
    Ok(out)
}

/// Samples of the Frobenius norm `|grad u|`.
pub fn grad_u_magnitude(u: &VelocityField) -> Vec<f64> {
    let parts: Vec<Vec<f64>> = [&u.u1, &u.u2]
        .iter()
        .flat_map(|c| {
            let (a, b) = gradient(c);
            [a.to_physical(), b.to_physical()]
        })
        .collect();
    (0..parts[0].len())
        .map(|i| parts.iter().map(|p| p[i] * p[i]).sum::<f64>().sqrt())
        .collect()
}

/// Exponent used for the lower-order velocity term `||u||_{L^r} ||theta||_{L^2}`.
pub const COMMUTATOR_R: f64 = 2.0;

/// Ratio of `||[R_beta, u.grad] theta||_{L^p}` to
/// `||grad u||_{L^p1} ||theta||_{B^{1-beta}_{p2,1}} + ||u||_{L^r} ||theta||_{L^2}`
/// with `1/p = 1/p1 + 1/p2`.
pub fn commutator_estimate_check(
    u: &VelocityField,
    theta: &SpectralField,
    beta: f64,
    (p, p1, p2): (f64, f64, f64),
    bank: &DyadicBank,
) -> Result<f64> {
    if !(2.0..f64::INFINITY).contains(&p) {
        return Err(invalid("p", format!("must lie in [2, inf), got {p}")));
    }
    if (1.0 / p - 1.0 / p1 - 1.0 / p2).abs() > 1e-12 {
        return Err(invalid("p1, p2", format!("1/{p} != 1/{p1} + 1/{p2}")));
    }
    let n = theta.n();
    let lhs = lp_of_samples(&commutator_rbeta(u, theta, beta)?.to_physical(), n, p)?;
    if lhs == 0.0 {
        return Ok(0.0);
    }
    let grad = lp_of_samples(&grad_u_magnitude(u), n, p1)?;
    let besov = besov_norm(theta, BesovIndex::new(1.0 - beta, p2, 1.0)?, bank)?;
    let rhs = grad * besov + u.lp_norm(COMMUTATOR_R)? * l2_norm(theta);
    Ok(lhs / rhs)
}

/// Pointwise dissipation defect `D = grad f . Lambda^b grad f - 1/2 Lambda^b |grad f|^2`,
/// returned on the grid of twice the resolution where every product is exact.
pub fn pointwise_defect(f: &SpectralField, b: f64) -> Result<SpectralField> {
    let (g1, g2) = gradient(f);
    let l1 = fractional_laplacian(&g1, b)?;
    let l2 = fractional_laplacian(&g2, b)?;
    let cross = exact_product(&g1, &l1)?.add(&exact_product(&g2, &l2)?)?;
    let sq = exact_product(&g1, &g1)?.add(&exact_product(&g2, &g2)?)?;
    cross.axpy(-0.5, &fractional_laplacian(&sq, b)?)
}

/// Scalar analogue `f Lambda^b f - 1/2 Lambda^b f^2`, on the doubled grid.
pub fn scalar_defect(f: &SpectralField, b: f64) -> Result<SpectralField> {
    let lf = fractional_laplacian(f, b)?;
    let cross = exact_product(f, &lf)?;
    cross.axpy(-0.5, &fractional_laplacian(&exact_product(f, f)?, b)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointwiseReport {
    pub min_defect: f64,
    /// Size of the individual terms, `||grad f||_inf ||Lambda^b grad f||_inf`.
    pub scale: f64,
    /// `D(x~) ||f||_inf^b / |grad f(x~)|^(2+b)` at the grid argmax `x~` of
    /// `|grad f|`; `None` when the gradient vanishes there.
    pub maxpoint_ratio: Option<f64>,
    /// `|grad f(x~)|` and `D(x~)`.
    pub max_grad: f64,
    pub defect_at_max: f64,
}

/// Value of a doubled-grid field at the coarse grid point `idx`.
fn at_coarse(fine: &[f64], n: usize, idx: usize) -> f64 {
    let (r, c) = (idx / n, idx % n);
    fine[(2 * r) * (2 * n) + 2 * c]
}

pub fn pointwise_bound_check(theta: &SpectralField, beta: f64) -> Result<PointwiseReport> {
    let n = theta.n();
    let d = pointwise_defect(theta, beta)?.to_physical();
    let (g1, g2) = gradient(theta);
    let (p1, p2) = (g1.to_physical(), g2.to_physical());
    let mag: Vec<f64> = p1.iter().zip(&p2).map(|(a, b)| a.hypot(*b)).collect();
    let (arg, max_grad) = mag
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, &v)| if v > best.1 { (i, v) } else { best });
    let lam =
        physical_max_abs(&fractional_laplacian(&g1, beta)?).max(physical_max_abs(&fractional_laplacian(&g2, beta)?));
    let min_defect = d.iter().copied().fold(f64::INFINITY, f64::min);
    let defect_at_max = at_coarse(&d, n, arg);
    let maxpoint_ratio =
        (max_grad > 0.0).then(|| defect_at_max * physical_max_abs(theta).powf(beta) / max_grad.powf(2.0 + beta));
    Ok(PointwiseReport {
        min_defect,
        scale: max_grad * lam,
        maxpoint_ratio,
        max_grad,
        defect_at_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogInequality {
    pub grad_u_linf: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `||grad u||_inf / (1 + ||u||_2 + ||omega||_inf ln(e + ||u||_{H^s}))`.
pub fn log_inequality_check(state: &FlowState, s_ref: f64) -> Result<LogInequality> {
    if !(s_ref > 2.0 && s_ref.is_finite()) {
        return Err(invalid("s_ref", format!("must exceed 2, got {s_ref}")));
    }
    let u = biot_savart(&state.omega);
    let grad_u_linf = grad_u_magnitude(&u).into_iter().fold(0.0, f64::max);
    let hs = sobolev_norm(&u.u1, s_ref).hypot(sobolev_norm(&u.u2, s_ref));
    let rhs = 1.0 + u.l2_norm() + physical_max_abs(&state.omega) * (E + hs).ln();
    Ok(LogInequality {
        grad_u_linf,
        rhs,
        ratio: grad_u_linf / rhs,
    })
}

/// `||u||_{L^r}` and the interpolation ratio `||u||_r / (||u||_2^{2/r} ||omega||_2^{1-2/r})`.
pub fn velocity_lr(state: &FlowState, r: f64) -> Result<(f64, f64)> {
    if !(2.0..f64::INFINITY).contains(&r) {
        return Err(invalid("r", format!("must lie in [2, inf), got {r}")));
    }
    let u = biot_savart(&state.omega);
    let lr = if r == 2.0 { u.l2_norm() } else { u.lp_norm(r)? };
    let denom = u.l2_norm().powf(2.0 / r) * l2_norm(&state.omega).powf(1.0 - 2.0 / r);
    let ratio = if lr == 0.0 { 0.0 } else { lr / denom };
    Ok((lr, ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;
    use num_complex::Complex64;

    #[test]
    fn g_of_pure_temperature() {
        let g = Grid::new(16).unwrap();
        let s = FlowState::new(
            SpectralField::zeros(&g),
            SpectralField::from_fn(&g, |x1, _| x1.sin()),
            0.0,
        )
        .unwrap();
        for beta in [0.3, 0.9] {
            let gq = combined_quantity(&s, beta).unwrap();
            assert!(gq.rel_diff(&SpectralField::from_fn(&g, |x1, _| -x1.cos())) < 1e-15);
        }
    }

    #[test]
    fn commutator_single_mode() {
        let g = Grid::new(16).unwrap();
        // stream function cos x2, omega = -cos x2, u = (sin x2, 0)
        let u = biot_savart(&SpectralField::from_fn(&g, |_, x2| -x2.cos()));
        assert!(u.u1.rel_diff(&SpectralField::from_fn(&g, |_, x2| x2.sin())) < 1e-15);
        let theta = SpectralField::from_fn(&g, |x1, _| x1.sin());
        for beta in [0.4, 0.7, 1.3] {
            let c = commutator_rbeta(&u, &theta, beta).unwrap();
            let k = 1.0 - 2f64.powf(-beta / 2.0);
            let exact = SpectralField::from_fn(&g, |x1, x2| k * x1.sin() * x2.sin());
            assert!(c.sub(&exact).unwrap().max_coeff() < 1e-15);
            let flux = commutator_rbeta_flux(&u, &theta, beta).unwrap();
            assert!(flux.sub(&exact).unwrap().max_coeff() < 1e-15);
        }
    }

    #[test]
    fn constant_velocity_commutes() {
        let g = Grid::new(16).unwrap();
        let mut u = VelocityField::zeros(&g);
        u.u1.coeffs_mut()[0] = Complex64::new(0.7, 0.0);
        u.u2.coeffs_mut()[0] = Complex64::new(-1.3, 0.0);
        let theta = SpectralField::from_fn(&g, |x1, x2| (x1 + 2.0 * x2).sin() + (3.0 * x1).cos());
        assert!(commutator_rbeta(&u, &theta, 0.6).unwrap().max_coeff() < 1e-14);
        let bank = DyadicBank::new(&g).unwrap();
        let r = commutator_estimate_check(&u, &theta, 0.6, (2.0, 4.0, 4.0), &bank).unwrap();
        assert!(r < 1e-14);
        let zero = SpectralField::zeros(&g);
        let u = biot_savart(&theta);
        assert_eq!(
            commutator_estimate_check(&u, &zero, 0.6, (2.0, 4.0, 4.0), &bank).unwrap(),
            0.0
        );
        assert!(commutator_estimate_check(&u, &theta, 0.6, (2.0, 4.0, 3.0), &bank).is_err());
        assert!(commutator_estimate_check(&u, &theta, 0.6, (1.0, 2.0, 2.0), &bank).is_err());
    }

    #[test]
    fn defect_of_a_single_sine() {
        let g = Grid::new(16).unwrap();
        let theta = SpectralField::from_fn(&g, |x1, _| x1.sin());
        for beta in [0.3, 0.8, 1.7] {
            let d = pointwise_defect(&theta, beta).unwrap();
            let exact = SpectralField::from_fn(d.grid(), |x1, _| {
                x1.cos().powi(2) - 2f64.powf(beta - 2.0) * (2.0 * x1).cos()
            });
            let err = d.sub(&exact).unwrap().max_coeff();
            assert!(err < 1e-14, "{err:e}");
            let r = pointwise_bound_check(&theta, beta).unwrap();
            // |grad theta| peaks at x1 = 0 where D = 1 - 2^(beta-2)
            assert!((r.defect_at_max - (1.0 - 2f64.powf(beta - 2.0))).abs() < 1e-14);
            assert!((r.maxpoint_ratio.unwrap() - (1.0 - 2f64.powf(beta - 2.0))).abs() < 1e-14);
            assert!(r.min_defect >= -1e-15);
        }
        let r = pointwise_bound_check(&theta, 0.8).unwrap();
        assert!((r.defect_at_max - 0.564_724_718_351_937_9).abs() < 1e-14);
    }

    #[test]
    fn constant_temperature_has_no_defect() {
        let g = Grid::new(16).unwrap();
        let mut theta = SpectralField::zeros(&g);
        theta.coeffs_mut()[0] = Complex64::new(2.5, 0.0);
        let r = pointwise_bound_check(&theta, 0.5).unwrap();
        assert_eq!(r.min_defect, 0.0);
        assert!(r.maxpoint_ratio.is_none());
    }

    #[test]
    fn log_inequality_single_mode() {
        let g = Grid::new(32).unwrap();
        let s = FlowState::new(
            SpectralField::from_fn(&g, |x1, _| x1.sin()),
            SpectralField::zeros(&g),
            0.0,
        )
        .unwrap();
        let l2 = (2.0 * std::f64::consts::PI.powi(2)).sqrt();
        for s_ref in [2.5, 3.0] {
            let r = log_inequality_check(&s, s_ref).unwrap();
            let expected = 1.0 / (1.0 + l2 + (E + 2f64.powf(s_ref / 2.0) * l2).ln());
            assert!((r.grad_u_linf - 1.0).abs() < 1e-14);
            assert!((r.ratio - expected).abs() < 1e-14);
        }
        assert_eq!(log_inequality_check(&FlowState::zeros(&g), 3.0).unwrap().ratio, 0.0);
        assert!(log_inequality_check(&s, 2.0).is_err());
    }

    #[test]
    fn l2_velocity_matches() {
        let g = Grid::new(16).unwrap();
        let s = FlowState::new(
            SpectralField::from_fn(&g, |x1, x2| (x1 + x2).sin() + 0.5 * (2.0 * x2).cos()),
            SpectralField::zeros(&g),
            0.0,
        )
        .unwrap();
        let (l2, ratio) = velocity_lr(&s, 2.0).unwrap();
        assert!((l2 - s.velocity().l2_norm()).abs() < 1e-15);
        assert!(ratio > 0.0);
        let (l8, _) = velocity_lr(&s, 8.0).unwrap();
        assert!(l8 > 0.0);
        assert_eq!(velocity_lr(&FlowState::zeros(&g), 4.0).unwrap(), (0.0, 0.0));
    }
}
