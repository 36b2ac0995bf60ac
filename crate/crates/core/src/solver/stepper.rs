use num_complex::Complex64;

use super::config::{Integrator, SolverConfig};
use super::state::FlowState;
use crate::error::{Error, Result};
use crate::spectral::{biot_savart, partial, SpectralField};

/// Nonlinear and buoyancy terms of the vorticity and temperature equations.
#[derive(Clone, Debug)]
pub struct Rhs {
    pub omega: SpectralField,
    pub theta: SpectralField,
    /// `max(|u1|, |u2|)` on the grid.
    pub u_max: f64,
}

/// `(-(u.grad omega) + d1 theta, -(u.grad theta))` with dealiased products
/// and `u` from Biot-Savart. The dissipation is left to the integrator.
pub fn rhs(state: &FlowState) -> Result<Rhs> {
    let grid = state.grid().clone();
    state.omega.same_grid(&state.theta)?;
    let u = biot_savart(&state.omega.dealiased());
    let u1 = u.u1.to_physical();
    let u2 = u.u2.to_physical();
    let u_max = u1.iter().chain(&u2).fold(0.0f64, |m, v| m.max(v.abs()));
    let advect = |f: &SpectralField| -> Result<SpectralField> {
        let f = f.dealiased();
        let d1 = partial(&f, 1).to_physical();
        let d2 = partial(&f, 2).to_physical();
        let prod: Vec<f64> = (0..grid.len()).map(|i| u1[i] * d1[i] + u2[i] * d2[i]).collect();
        let mut out = SpectralField::from_physical(&grid, &prod)?;
        out.dealias();
        // a divergence-free transport has no mean
        out.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
        Ok(out)
    };
    let omega = partial(&state.theta.dealiased(), 1).sub(&advect(&state.omega)?)?;
    let theta = advect(&state.theta)?.scale(-1.0);
    Ok(Rhs { omega, theta, u_max })
}

/// Per-mode exponential-integrator weights for one linear rate `L(k) <= 0`.
#[derive(Clone, Debug)]
struct Weights {
    e: Vec<f64>,
    e_half: Vec<f64>,
    /// `(h/2) phi1(hL/2)`
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
    /// `h phi1(hL)`, `h phi2(hL)`
    p1: Vec<f64>,
    p2: Vec<f64>,
}

/// `(phi1, phi2, phi3)(z)`; Taylor series near the origin where the closed
/// forms cancel.
pub fn phi_functions(z: f64) -> (f64, f64, f64) {
    if z.abs() < 1.0 {
        let mut term = 1.0;
        let (mut p1, mut p2, mut p3) = (0.0, 0.0, 0.0);
        // term = z^m / m!; phi_k = sum_m z^m m! / (m+k)!
        for m in 0..40 {
            let mf = m as f64;
            p1 += term / (mf + 1.0);
            p2 += term / ((mf + 1.0) * (mf + 2.0));
            p3 += term / ((mf + 1.0) * (mf + 2.0) * (mf + 3.0));
            term *= z / (mf + 1.0);
        }
        return (p1, p2, p3);
    }
    let ez = z.exp();
    let p1 = (ez - 1.0) / z;
    let p2 = (ez - 1.0 - z) / (z * z);
    let p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
    (p1, p2, p3)
}

#[derive(Clone, Copy, Debug)]
enum W {
    E,
    EHalf,
    Q,
    F1,
    F2,
    F3,
    P1,
    P2,
}

impl Weights {
    fn get(&self, w: W) -> &[f64] {
        match w {
            W::E => &self.e,
            W::EHalf => &self.e_half,
            W::Q => &self.q,
            W::F1 => &self.f1,
            W::F2 => &self.f2,
            W::F3 => &self.f3,
            W::P1 => &self.p1,
            W::P2 => &self.p2,
        }
    }

    fn new(rates: &[f64], h: f64) -> Weights {
        let len = rates.len();
        let mut w = Weights {
            e: Vec::with_capacity(len),
            e_half: Vec::with_capacity(len),
            q: Vec::with_capacity(len),
            f1: Vec::with_capacity(len),
            f2: Vec::with_capacity(len),
            f3: Vec::with_capacity(len),
            p1: Vec::with_capacity(len),
            p2: Vec::with_capacity(len),
        };
        for &l in rates {
            let z = h * l;
            let (a1, a2, a3) = phi_functions(z);
            let (b1, _, _) = phi_functions(0.5 * z);
            w.e.push(z.exp());
            w.e_half.push((0.5 * z).exp());
            w.q.push(0.5 * h * b1);
            w.f1.push(h * (a1 - 3.0 * a2 + 4.0 * a3));
            w.f2.push(h * (a2 - 2.0 * a3));
            w.f3.push(h * (4.0 * a3 - a2));
            w.p1.push(h * a1);
            w.p2.push(h * a2);
        }
        w
    }
}

/// `sum_i s_i w_i(k) f_i(k)` mode by mode.
fn combine(terms: &[(f64, &[f64], &SpectralField)]) -> SpectralField {
    let first = terms[0].2;
    let mut out = SpectralField::zeros(first.grid());
    for &(s, w, f) in terms {
        for ((o, &wk), &c) in out.coeffs_mut().iter_mut().zip(w).zip(f.coeffs()) {
            *o += c * (s * wk);
        }
    }
    out
}

/// Fixed-step integrator for one configuration and step size.
#[derive(Clone, Debug)]
pub struct Stepper {
    cfg: SolverConfig,
    h: f64,
    omega: Weights,
    theta: Weights,
}

impl Stepper {
    pub fn new(cfg: &SolverConfig) -> Result<Stepper> {
        Stepper::with_step(cfg, cfg.dt)
    }

    pub fn with_step(cfg: &SolverConfig, h: f64) -> Result<Stepper> {
        cfg.validate()?;
        let grid = crate::spectral::Grid::new(cfg.n)?;
        let rate = |coef: f64, power: f64| -> Vec<f64> {
            (0..grid.len())
                .map(|idx| {
                    let (k1, k2) = grid.mode(idx);
                    let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
                    if r == 0.0 {
                        0.0
                    } else {
                        -coef * r.powf(power)
                    }
                })
                .collect()
        };
        Ok(Stepper {
            cfg: cfg.clone(),
            h,
            omega: Weights::new(&rate(cfg.nu, cfg.alpha), h),
            theta: Weights::new(&rate(cfg.kappa, cfg.beta), h),
        })
    }

    pub fn step_size(&self) -> f64 {
        self.h
    }

    fn stage(&self, terms: &[(f64, W, &SpectralField, &SpectralField)]) -> FlowState {
        let omega: Vec<_> = terms.iter().map(|&(s, w, f, _)| (s, self.omega.get(w), f)).collect();
        let theta: Vec<_> = terms.iter().map(|&(s, w, _, f)| (s, self.theta.get(w), f)).collect();
        FlowState {
            omega: combine(&omega),
            theta: combine(&theta),
            t: 0.0,
        }
    }

    /// Advances `state` by one step. Rejects steps violating the advective
    /// CFL bound and reports non-finite results.
    pub fn step(&self, state: &FlowState) -> Result<FlowState> {
        if state.n() != self.cfg.n {
            return Err(Error::GridMismatch(self.cfg.n, state.n()));
        }
        let nv = rhs(state)?;
        let limit = self.cfg.cfl_limit(nv.u_max);
        if self.h > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl {
                dt: self.h,
                suggested: limit,
            });
        }
        let v = state;
        let mut next = match self.cfg.integrator {
            Integrator::ImexEuler => self.stage(&[(1.0, W::E, &v.omega, &v.theta), (1.0, W::P1, &nv.omega, &nv.theta)]),
            Integrator::EtdRk2 => {
                let a = self.stage(&[(1.0, W::E, &v.omega, &v.theta), (1.0, W::P1, &nv.omega, &nv.theta)]);
                let na = rhs(&a)?;
                self.stage(&[
                    (1.0, W::E, &v.omega, &v.theta),
                    (1.0, W::P1, &nv.omega, &nv.theta),
                    (1.0, W::P2, &na.omega, &na.theta),
                    (-1.0, W::P2, &nv.omega, &nv.theta),
                ])
            }
            Integrator::EtdRk4 => {
                let a = self.stage(&[(1.0, W::EHalf, &v.omega, &v.theta), (1.0, W::Q, &nv.omega, &nv.theta)]);
                let na = rhs(&a)?;
                let b = self.stage(&[(1.0, W::EHalf, &v.omega, &v.theta), (1.0, W::Q, &na.omega, &na.theta)]);
                let nb = rhs(&b)?;
                let c = self.stage(&[
                    (1.0, W::EHalf, &a.omega, &a.theta),
                    (2.0, W::Q, &nb.omega, &nb.theta),
                    (-1.0, W::Q, &nv.omega, &nv.theta),
                ]);
                let nc = rhs(&c)?;
                self.stage(&[
                    (1.0, W::E, &v.omega, &v.theta),
                    (1.0, W::F1, &nv.omega, &nv.theta),
                    (2.0, W::F2, &na.omega, &na.theta),
                    (2.0, W::F2, &nb.omega, &nb.theta),
                    (1.0, W::F3, &nc.omega, &nc.theta),
                ])
            }
        };
        next.t = state.t + self.h;
        next.enforce();
        if !next.is_finite() {
            return Err(Error::NonFinite { t: next.t });
        }
        Ok(next)
    }
}
