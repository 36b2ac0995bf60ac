use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Exponential (integrating-factor) Euler: exact dissipation, explicit
    /// first-order nonlinearity.
    ImexEuler,
    EtdRk2,
    EtdRk4,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

fn default_integrator() -> Integrator {
    Integrator::EtdRk4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub alpha: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub nu: f64,
    #[serde(default = "one")]
    pub kappa: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_end: f64,
    #[serde(default = "default_integrator")]
    pub integrator: Integrator,
    #[serde(default = "half")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub seed: u64,
}

impl SolverConfig {
    /// ETD-RK4, `nu = kappa = 1`, CFL safety 0.5, seed 0.
    pub fn new(alpha: f64, beta: f64, n: usize, dt: f64, t_end: f64) -> SolverConfig {
        SolverConfig {
            alpha,
            beta,
            nu: 1.0,
            kappa: 1.0,
            n,
            dt,
            t_end,
            integrator: Integrator::EtdRk4,
            cfl_safety: 0.5,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !(v > 0.0 && v <= 2.0) {
                return Err(invalid(name, format!("must lie in (0, 2], got {v}")));
            }
        }
        for (name, v) in [("nu", self.nu), ("kappa", self.kappa)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(name, format!("must be finite and nonnegative, got {v}")));
            }
        }
        if self.n < 8 || !self.n.is_multiple_of(2) {
            return Err(invalid("N", format!("must be even and at least 8, got {}", self.n)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(invalid("dt", format!("must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(invalid(
                "T",
                format!("must be finite and nonnegative, got {}", self.t_end),
            ));
        }
        if self.t_end > 0.0 && self.t_end < self.dt {
            return Err(invalid(
                "T",
                format!("horizon {} is shorter than dt {}", self.t_end, self.dt),
            ));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(invalid(
                "cfl_safety",
                format!("must lie in (0, 1], got {}", self.cfl_safety),
            ));
        }
        Ok(())
    }

    /// Largest admissible step for a velocity with the given grid maxima.
    pub fn cfl_limit(&self, u_max: f64) -> f64 {
        self.cfl_safety * (2.0 * std::f64::consts::PI / self.n as f64) / u_max.max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_field_names_and_defaults() {
        let cfg: SolverConfig = serde_json::from_str(r#"{"alpha":0.8,"beta":0.7,"N":64,"dt":0.01,"T":1.0}"#).unwrap();
        assert_eq!(cfg, SolverConfig::new(0.8, 0.7, 64, 0.01, 1.0));
        let text = serde_json::to_string(&cfg).unwrap();
        assert!(text.contains(r#""integrator":"etd-rk4""#));
        let back: SolverConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn validation() {
        let ok = SolverConfig::new(0.8, 0.7, 64, 0.01, 1.0);
        assert!(ok.validate().is_ok());
        assert!(SolverConfig {
            alpha: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            beta: 2.5,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            n: 30 + 1,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig { dt: 0.0, ..ok.clone() }.validate().is_err());
        assert!(SolverConfig {
            t_end: 0.001,
            ..ok.clone()
        }
        .validate()
        .is_err());
        assert!(SolverConfig {
            t_end: 0.0,
            ..ok.clone()
        }
        .validate()
        .is_ok());
        assert!(SolverConfig { cfl_safety: 1.5, ..ok }.validate().is_err());
    }
}
