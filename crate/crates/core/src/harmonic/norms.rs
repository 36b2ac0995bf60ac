use std::f64::consts::PI;

use super::bank::DyadicBank;
use crate::error::{invalid, Result};
use crate::spectral::{lp_norm, SpectralField};

/// Besov index `(s, p, r)`; `p` and `r` may be `f64::INFINITY`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, r: f64) -> Result<BesovIndex> {
        if !s.is_finite() {
            return Err(invalid("s", "smoothness must be finite"));
        }
        if p.is_nan() || p < 1.0 {
            return Err(invalid("p", format!("need p >= 1, got {p}")));
        }
        if r.is_nan() || r < 1.0 {
            return Err(invalid("r", format!("need r >= 1, got {r}")));
        }
        Ok(BesovIndex { s, p, r })
    }
}

/// Per-block terms `(j, 2^{js} ||Delta_j f||_{L^p})`.
pub fn besov_breakdown(f: &SpectralField, idx: BesovIndex, bank: &DyadicBank) -> Result<Vec<(i32, f64)>> {
    let idx = BesovIndex::new(idx.s, idx.p, idx.r)?;
    bank.blocks()
        .map(|j| {
            let block = bank.block(f, j)?;
            let norm = if block.max_coeff() == 0.0 {
                0.0
            } else {
                lp_norm(&block, idx.p)?
            };
            Ok((j, (j as f64 * idx.s).exp2() * norm))
        })
        .collect()
}

/// l^r combination of the block terms (sup for `r = inf`).
pub fn combine_terms(terms: &[(i32, f64)], r: f64) -> f64 {
    if r.is_infinite() {
        terms.iter().fold(0.0, |m, &(_, t)| m.max(t))
    } else {
        terms.iter().map(|&(_, t)| t.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `||f||_{B^s_{p,r}} = ( sum_{j >= -1} (2^{js} ||Delta_j f||_{L^p})^r )^{1/r}`.
pub fn besov_norm(f: &SpectralField, idx: BesovIndex, bank: &DyadicBank) -> Result<f64> {
    Ok(combine_terms(&besov_breakdown(f, idx, bank)?, idx.r))
}

/// `||f||_{H^s} = ( (2pi)^2 sum (1 + |k|^2)^s |c_k|^2 )^{1/2}`
pub fn sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    let g = f.grid();
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let (k1, k2) = g.mode(idx);
            (1.0 + (k1 * k1 + k2 * k2) as f64).powf(s) * c.norm_sqr()
        })
        .sum();
    (4.0 * PI * PI * sum).sqrt()
}

/// `||Lambda^s f||_{L^2}`; the zero mode only counts when `s = 0`.
pub fn homogeneous_sobolev_norm(f: &SpectralField, s: f64) -> f64 {
    crate::spectral::homogeneous_l2(f, s)
}
