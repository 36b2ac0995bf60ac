use serde::{Deserialize, Serialize};

use super::quantities::{combined_quantity, log_inequality_check, pointwise_bound_check, scalar_defect, velocity_lr};
use crate::error::{invalid, Result};
use crate::solver::{FlowState, Monitor, SolverConfig};
use crate::spectral::{gradient, homogeneous_l2, l2_norm, lp_norm, physical_max_abs, sup_norm, SpectralField};

fn default_r_list() -> Vec<f64> {
    vec![4.0, 8.0]
}

fn default_s_ref() -> f64 {
    3.0
}

fn default_tolerance() -> f64 {
    1e-4
}

/// Exponents and slack for the trajectory monitors. Unset exponents take
/// interior points of their admissible ranges, see [`DiagnosticsConfig::resolve`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    #[serde(default)]
    pub varrho: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default = "default_r_list")]
    pub r_list: Vec<f64>,
    #[serde(default = "default_s_ref")]
    pub s_ref: f64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            varrho: None,
            delta: None,
            r_list: default_r_list(),
            s_ref: default_s_ref(),
            tolerance: default_tolerance(),
        }
    }
}

/// `min(0.9 beta/2, midpoint of (max{(4-5b)/2, (2+a-3b)/2}, b/2))`, clamped to `[0, b/2)`.
pub fn default_varrho(alpha: f64, beta: f64) -> f64 {
    let lower = ((4.0 - 5.0 * beta) / 2.0).max((2.0 + alpha - 3.0 * beta) / 2.0);
    let mid = 0.5 * (lower + 0.5 * beta);
    (0.45 * beta).min(mid).max(0.0)
}

/// Midpoint of `((2 - a - b)/2, b/2)`, clamped to `[0, 0.9 b/2]`.
pub fn default_delta(alpha: f64, beta: f64) -> f64 {
    let mid = 0.5 * ((2.0 - alpha - beta) / 2.0 + 0.5 * beta);
    mid.clamp(0.0, 0.45 * beta)
}

impl DiagnosticsConfig {
    /// Exponents `(varrho, delta)` for the given `(alpha, beta)`, checked
    /// against `[0, beta/2)`.
    pub fn resolve(&self, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        let varrho = self.varrho.unwrap_or_else(|| default_varrho(alpha, beta));
        let delta = self.delta.unwrap_or_else(|| default_delta(alpha, beta));
        for (name, v) in [("varrho", varrho), ("delta", delta)] {
            if !(v >= 0.0 && v < 0.5 * beta) {
                return Err(invalid(
                    name,
                    format!("must lie in [0, beta/2) = [0, {}), got {v}", 0.5 * beta),
                ));
            }
        }
        for &r in &self.r_list {
            if !(2.0..f64::INFINITY).contains(&r) {
                return Err(invalid("r_list", format!("exponents must lie in [2, inf), got {r}")));
            }
        }
        if !(self.s_ref > 2.0 && self.s_ref.is_finite()) {
            return Err(invalid("s_ref", format!("must exceed 2, got {}", self.s_ref)));
        }
        if !(self.tolerance >= 0.0) {
            return Err(invalid(
                "tolerance",
                format!("must be nonnegative, got {}", self.tolerance),
            ));
        }
        Ok((varrho, delta))
    }
}

/// One diagnostics sample. Norms are on the torus `[0, 2pi)^2`; residuals
/// are relative and signed, positive meaning the inequality is violated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub l2_theta: f64,
    pub l4_theta: f64,
    /// Refined (off-grid) supremum.
    pub linf_theta: f64,
    pub l2_u: f64,
    pub h_half_beta_theta_sq_cum: f64,
    pub l2_g: f64,
    pub h_varrho_theta: f64,
    pub l2_omega: f64,
    pub h_delta_theta: f64,
    /// `Phi`, grid maximum of `|grad theta|`.
    pub linf_grad_theta: f64,
    /// `Omega`, grid maximum of `|omega|`.
    pub linf_omega: f64,
    /// `||u||_{L^r}` for each configured `r`.
    pub lr_u: Vec<f64>,
    pub grad_u_linf: f64,
    /// `||grad u||_inf / (1 + ||u||_2 + ||omega||_inf ln(e + ||u||_{H^s}))`.
    pub log_ineq_residual: f64,
    /// Smallest temperature-gradient defect over the doubled grid, divided by its term scale.
    pub pointwise_bound_min: f64,
    /// `||theta||^2 + 2 kappa int ||Lambda^{beta/2} theta||^2` against `||theta_0||^2`.
    pub res_energy_theta: f64,
    /// Largest relative increase of `||theta||_{L^p}`, `p = 2, 4, inf`.
    pub res_max_principle: f64,
    /// Relative increase of the grid maximum of `|theta|`.
    pub res_max_principle_grid: f64,
    /// `||u||^2 + 2 nu int ||Lambda^{alpha/2} u||^2` against `(||u_0|| + t ||theta_0||)^2`.
    pub res_velocity: f64,
    pub e1: f64,
    pub e2: f64,
    pub e1_integral: f64,
    pub e2_integral: f64,
    /// Interpolation ratio `||u||_r / (||u||_2^{2/r} ||omega||_2^{1-2/r})` per `r`.
    pub lr_interp_ratio: Vec<f64>,
    /// `D(x~) ||theta||_inf^beta / Phi^{2+beta}` at the grid argmax of `|grad theta|`.
    pub pointwise_ratio_theta: f64,
    /// Temperature-gradient defect at the argmax of `|grad theta|`.
    pub defect_theta: f64,
    /// Vorticity defect `omega Lambda^alpha omega - 1/2 Lambda^alpha omega^2` at the argmax of `|omega|`.
    pub defect_omega: f64,
    /// Centered-difference residuals of the max-norm differential inequalities.
    pub res_phi_ode: f64,
    pub res_omega_ode: f64,
}

impl DiagnosticsRecord {
    /// Column names in output order.
    pub fn header(r_list: &[f64]) -> Vec<String> {
        let mut h: Vec<String> = [
            "t",
            "l2_theta",
            "l4_theta",
            "linf_theta",
            "l2_u",
            "h_half_beta_theta_sq_cum",
            "l2_G",
            "h_varrho_theta",
            "l2_omega",
            "h_delta_theta",
            "linf_grad_theta",
            "linf_omega",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        h.extend(r_list.iter().map(|r| format!("lr_u_{r}")));
        h.extend(
            [
                "grad_u_linf",
                "log_ineq_residual",
                "pointwise_bound_min",
                "res_energy_theta",
                "res_max_principle",
                "res_max_principle_grid",
                "res_velocity",
                "e1",
                "e2",
                "e1_integral",
                "e2_integral",
            ]
            .iter()
            .map(|s| s.to_string()),
        );
        h.extend(r_list.iter().map(|r| format!("lr_interp_ratio_{r}")));
        h.extend(
            [
                "pointwise_ratio_theta",
                "defect_theta",
                "defect_omega",
                "res_phi_ode",
                "res_omega_ode",
            ]
            .iter()
            .map(|s| s.to_string()),
        );
        h
    }

    /// Values in the order of [`DiagnosticsRecord::header`].
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![
            self.t,
            self.l2_theta,
            self.l4_theta,
            self.linf_theta,
            self.l2_u,
            self.h_half_beta_theta_sq_cum,
            self.l2_g,
            self.h_varrho_theta,
            self.l2_omega,
            self.h_delta_theta,
            self.linf_grad_theta,
            self.linf_omega,
        ];
        v.extend(&self.lr_u);
        v.extend([
            self.grad_u_linf,
            self.log_ineq_residual,
            self.pointwise_bound_min,
            self.res_energy_theta,
            self.res_max_principle,
            self.res_max_principle_grid,
            self.res_velocity,
            self.e1,
            self.e2,
            self.e1_integral,
            self.e2_integral,
        ]);
        v.extend(&self.lr_interp_ratio);
        v.extend([
            self.pointwise_ratio_theta,
            self.defect_theta,
            self.defect_omega,
            self.res_phi_ode,
            self.res_omega_ode,
        ]);
        v
    }

    /// Largest of the three energy-law residuals.
    pub fn worst_energy_residual(&self) -> f64 {
        self.res_energy_theta.max(self.res_max_principle).max(self.res_velocity)
    }
}

/// Time-integrated dissipation terms.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Integrands {
    theta_half_beta: f64,
    u_half_alpha: f64,
    g_half_alpha: f64,
    theta_varrho: f64,
    omega_half_alpha: f64,
    theta_delta: f64,
}

impl Integrands {
    fn axpy(&mut self, s: f64, o: &Integrands) {
        self.theta_half_beta += s * o.theta_half_beta;
        self.u_half_alpha += s * o.u_half_alpha;
        self.g_half_alpha += s * o.g_half_alpha;
        self.theta_varrho += s * o.theta_varrho;
        self.omega_half_alpha += s * o.omega_half_alpha;
        self.theta_delta += s * o.theta_delta;
    }
}

#[derive(Clone, Copy, Debug)]
struct Initial {
    theta_l2: f64,
    theta_l4: f64,
    theta_sup: f64,
    theta_grid_max: f64,
    u_l2: f64,
    t0: f64,
}

/// Streams [`DiagnosticsRecord`]s along a run. Dissipation integrals are
/// accumulated every step with the trapezoid rule.
pub struct DiagnosticsMonitor {
    cfg: DiagnosticsConfig,
    alpha: f64,
    beta: f64,
    nu: f64,
    kappa: f64,
    varrho: f64,
    delta: f64,
    integrals: Integrands,
    last: Option<(f64, Integrands)>,
    initial: Option<Initial>,
    records: Vec<DiagnosticsRecord>,
}

/// `||Lambda^s f||^2_{L^2}`
fn hsq(f: &SpectralField, s: f64) -> f64 {
    homogeneous_l2(f, s).powi(2)
}

impl DiagnosticsMonitor {
    pub fn new(solver: &SolverConfig, cfg: DiagnosticsConfig) -> Result<DiagnosticsMonitor> {
        let (varrho, delta) = cfg.resolve(solver.alpha, solver.beta)?;
        Ok(DiagnosticsMonitor {
            cfg,
            alpha: solver.alpha,
            beta: solver.beta,
            nu: solver.nu,
            kappa: solver.kappa,
            varrho,
            delta,
            integrals: Integrands::default(),
            last: None,
            initial: None,
            records: Vec::new(),
        })
    }

    pub fn exponents(&self) -> (f64, f64) {
        (self.varrho, self.delta)
    }

    pub fn config(&self) -> &DiagnosticsConfig {
        &self.cfg
    }

    fn integrands(&self, s: &FlowState) -> Result<Integrands> {
        let g = combined_quantity(s, self.beta)?;
        Ok(Integrands {
            theta_half_beta: hsq(&s.theta, 0.5 * self.beta),
            // |u^(k)| = |omega^(k)| / |k|
            u_half_alpha: hsq(&s.omega, 0.5 * self.alpha - 1.0),
            g_half_alpha: hsq(&g, 0.5 * self.alpha),
            theta_varrho: hsq(&s.theta, self.varrho + 0.5 * self.beta),
            omega_half_alpha: hsq(&s.omega, 0.5 * self.alpha),
            theta_delta: hsq(&s.theta, self.delta + 0.5 * self.beta),
        })
    }

    fn record(&mut self, s: &FlowState) -> Result<DiagnosticsRecord> {
        let theta_l2 = l2_norm(&s.theta);
        let theta_l4 = lp_norm(&s.theta, 4.0)?;
        let theta_sup = sup_norm(&s.theta);
        let theta_grid_max = physical_max_abs(&s.theta);
        let u_l2 = s.velocity().l2_norm();
        let init = *self.initial.get_or_insert(Initial {
            theta_l2,
            theta_l4,
            theta_sup,
            theta_grid_max,
            u_l2,
            t0: s.t,
        });
        let g = combined_quantity(s, self.beta)?;
        let (g1, g2) = gradient(&s.theta);
        let phi = g1
            .to_physical()
            .iter()
            .zip(g2.to_physical())
            .fold(0.0f64, |m, (a, b)| m.max(a.hypot(b)));
        let omega_vals = s.omega.to_physical();
        let (w_arg, omega_max) =
            omega_vals.iter().enumerate().fold(
                (0, 0.0f64),
                |best, (i, v)| if v.abs() > best.1 { (i, v.abs()) } else { best },
            );
        let mut lr_u = Vec::new();
        let mut lr_interp_ratio = Vec::new();
        for &r in &self.cfg.r_list {
            let (lr, ratio) = velocity_lr(s, r)?;
            lr_u.push(lr);
            lr_interp_ratio.push(ratio);
        }
        let log = log_inequality_check(s, self.cfg.s_ref)?;
        let pw = pointwise_bound_check(&s.theta, self.beta)?;
        let defect_omega = {
            let d = scalar_defect(&s.omega, self.alpha)?.to_physical();
            let n = s.n();
            d[(2 * (w_arg / n)) * (2 * n) + 2 * (w_arg % n)]
        };

        let rel = |now: f64, then: f64| if then > 0.0 { (now - then) / then } else { now };
        let ints = self.integrals;
        let res_energy_theta = rel(
            theta_l2.powi(2) + 2.0 * self.kappa * ints.theta_half_beta,
            init.theta_l2.powi(2),
        );
        let res_max_principle = rel(theta_l2, init.theta_l2)
            .max(rel(theta_l4, init.theta_l4))
            .max(rel(theta_sup, init.theta_sup));
        let res_max_principle_grid = rel(theta_grid_max, init.theta_grid_max);
        let bound = (init.u_l2 + (s.t - init.t0) * init.theta_l2).powi(2);
        let res_velocity = rel(u_l2.powi(2) + 2.0 * self.nu * ints.u_half_alpha, bound);
        let e1_integral = ints.g_half_alpha + ints.theta_varrho;
        let e2_integral = ints.omega_half_alpha + ints.theta_delta;
        let h_varrho_theta = homogeneous_l2(&s.theta, self.varrho);
        let h_delta_theta = homogeneous_l2(&s.theta, self.delta);
        let l2_g = l2_norm(&g);
        let l2_omega = l2_norm(&s.omega);
        Ok(DiagnosticsRecord {
            t: s.t,
            l2_theta: theta_l2,
            l4_theta: theta_l4,
            linf_theta: theta_sup,
            l2_u: u_l2,
            h_half_beta_theta_sq_cum: ints.theta_half_beta,
            l2_g,
            h_varrho_theta,
            l2_omega,
            h_delta_theta,
            linf_grad_theta: phi,
            linf_omega: omega_max,
            lr_u,
            grad_u_linf: log.grad_u_linf,
            log_ineq_residual: log.ratio,
            pointwise_bound_min: if pw.scale > 0.0 { pw.min_defect / pw.scale } else { 0.0 },
            res_energy_theta,
            res_max_principle,
            res_max_principle_grid,
            res_velocity,
            e1: l2_g.powi(2) + h_varrho_theta.powi(2) + e1_integral,
            e2: l2_omega.powi(2) + h_delta_theta.powi(2) + e2_integral,
            e1_integral,
            e2_integral,
            lr_interp_ratio,
            pointwise_ratio_theta: pw.maxpoint_ratio.unwrap_or(0.0),
            defect_theta: pw.defect_at_max,
            defect_omega,
            res_phi_ode: 0.0,
            res_omega_ode: 0.0,
        })
    }

    /// Records so far, with the max-norm residuals filled in.
    pub fn records(&self) -> Vec<DiagnosticsRecord> {
        let mut out = self.records.clone();
        maxnorm_ode_residuals(&mut out);
        out
    }

    pub fn into_records(self) -> Vec<DiagnosticsRecord> {
        let mut out = self.records;
        maxnorm_ode_residuals(&mut out);
        out
    }
}

impl Monitor for DiagnosticsMonitor {
    fn on_step(&mut self, prev: &FlowState, next: &FlowState) -> Result<()> {
        let a = match self.last {
            Some((t, v)) if t == prev.t => v,
            _ => self.integrands(prev)?,
        };
        let b = self.integrands(next)?;
        let h = next.t - prev.t;
        self.integrals.axpy(0.5 * h, &a);
        self.integrals.axpy(0.5 * h, &b);
        self.last = Some((next.t, b));
        Ok(())
    }

    fn on_sample(&mut self, state: &FlowState) -> Result<()> {
        let r = self.record(state)?;
        self.records.push(r);
        Ok(())
    }
}

/// Fills `res_phi_ode` and `res_omega_ode` from centered differences of
/// `Phi^2` and `Omega^2` (one-sided at the ends):
///
/// `d(Phi^2)/dt - (2 Phi^2 ||grad u||_inf - 2 D_theta(x~))` and
/// `d(Omega^2)/dt - (2 Phi Omega - 2 D_omega(x^))`,
///
/// each divided by the sum of the magnitudes of its terms.
pub fn maxnorm_ode_residuals(records: &mut [DiagnosticsRecord]) {
    let m = records.len();
    if m < 2 {
        for r in records.iter_mut() {
            r.res_phi_ode = 0.0;
            r.res_omega_ode = 0.0;
        }
        return;
    }
    let phi2: Vec<f64> = records.iter().map(|r| r.linf_grad_theta.powi(2)).collect();
    let om2: Vec<f64> = records.iter().map(|r| r.linf_omega.powi(2)).collect();
    let ts: Vec<f64> = records.iter().map(|r| r.t).collect();
    let deriv = |v: &[f64], i: usize| {
        let (a, b) = if i == 0 {
            (0, 1)
        } else if i == m - 1 {
            (m - 2, m - 1)
        } else {
            (i - 1, i + 1)
        };
        (v[b] - v[a]) / (ts[b] - ts[a])
    };
    let normalized = |lhs: f64, terms: &[f64]| {
        let scale: f64 = lhs.abs() + terms.iter().map(|t| t.abs()).sum::<f64>();
        let rhs: f64 = terms.iter().sum();
        if scale > 0.0 {
            (lhs - rhs) / scale
        } else {
            0.0
        }
    };
    for i in 0..m {
        let dphi = deriv(&phi2, i);
        let dom = deriv(&om2, i);
        let r = &records[i];
        let phi_terms = [2.0 * phi2[i] * r.grad_u_linf, -2.0 * r.defect_theta];
        let om_terms = [2.0 * r.linf_grad_theta * r.linf_omega, -2.0 * r.defect_omega];
        let (a, b) = (normalized(dphi, &phi_terms), normalized(dom, &om_terms));
        records[i].res_phi_ode = a;
        records[i].res_omega_ode = b;
    }
}

/// Least-squares slope of `ln(values)` against `times` over the final half
/// of the samples; `None` with fewer than two positive samples there.
pub fn log_growth_rate(times: &[f64], values: &[f64]) -> Option<f64> {
    if times.is_empty() {
        return None;
    }
    let t_end = times[times.len() - 1];
    let t_mid = 0.5 * (times[0] + t_end);
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= t_mid && **v > 0.0 && v.is_finite())
        .map(|(t, v)| (*t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let cov: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - mv)).sum();
    let var: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    (var > 0.0).then(|| cov / var)
}
