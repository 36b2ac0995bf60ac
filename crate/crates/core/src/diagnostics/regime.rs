use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Criticality {
    Supercritical,
    Critical,
    Subcritical,
}

impl fmt::Display for Criticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criticality::Supercritical => "SUPERCRITICAL",
            Criticality::Critical => "CRITICAL",
            Criticality::Subcritical => "SUBCRITICAL",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub alpha: f64,
    pub beta: f64,
    pub criticality: Criticality,
    pub beta_star: f64,
    pub covered: bool,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cover = if self.covered { "COVERED" } else { "NOT_COVERED" };
        write!(f, "{}, beta*={}, {}", self.criticality, self.beta_star, cover)
    }
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must lie in (0, 1), got {v}")))
    }
}

/// Global-regularity threshold in `beta` for dissipation exponent `alpha`:
/// `max{2/3, (4 - a^2)/(4 + 3a)}` for `a <= 2/3`, `(2 - a)/2` above.
pub fn beta_star(alpha: f64) -> Result<f64> {
    check_unit("alpha", alpha)?;
    Ok(if alpha <= 2.0 / 3.0 {
        (2.0 / 3.0f64).max((4.0 - alpha * alpha) / (4.0 + 3.0 * alpha))
    } else {
        (2.0 - alpha) / 2.0
    })
}

pub fn regime_classify(alpha: f64, beta: f64) -> Result<Regime> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    let s = alpha + beta;
    let criticality = if s > 1.0 {
        Criticality::Subcritical
    } else if s < 1.0 {
        Criticality::Supercritical
    } else {
        Criticality::Critical
    };
    let beta_star = beta_star(alpha)?;
    Ok(Regime {
        alpha,
        beta,
        criticality,
        beta_star,
        covered: beta > beta_star,
    })
}
