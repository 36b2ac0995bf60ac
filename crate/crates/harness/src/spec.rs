//! JSON experiment and sweep descriptions.

use std::path::{Path, PathBuf};

use bsq_core::diagnostics::DiagnosticsConfig;
use bsq_core::solver::{make_initial_data, FlowState, InitKind, SolverConfig};
use bsq_core::spectral::{Grid, SpectralField};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitChoice {
    TaylorGreen,
    RandomSmooth,
    ShearBubble,
    /// `omega = amplitude sin x1`, `theta = 0`.
    Eigenmode,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSpec {
    pub kind: InitChoice,
    /// Falls back to `solver.seed` when absent.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "one")]
    pub amplitude: f64,
}

fn default_cadence() -> f64 {
    100.0
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Diagnostic samples per unit time.
    #[serde(default = "default_cadence")]
    pub cadence: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: default_dir(),
            cadence: default_cadence(),
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub schema_version: u32,
    #[serde(default)]
    pub label: String,
    pub solver: SolverConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    pub init: InitSpec,
    #[serde(default)]
    pub outputs: OutputSpec,
}

fn check_schema(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(HarnessError::Invalid(format!(
            "schema_version: expected {SCHEMA_VERSION}, got {v}"
        )));
    }
    Ok(())
}

fn field_err(field: &str, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Invalid(format!("{field}: {e}"))
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<ExperimentSpec> {
        let spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("config: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<ExperimentSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| field_err(&path.display().to_string(), e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        check_schema(self.schema_version)?;
        self.solver.validate().map_err(|e| field_err("solver", e))?;
        self.diagnostics
            .resolve(self.solver.alpha, self.solver.beta)
            .map_err(|e| field_err("diagnostics", e))?;
        if !(self.init.amplitude.is_finite()) {
            return Err(field_err("init.amplitude", "must be finite"));
        }
        if !(self.outputs.cadence > 0.0 && self.outputs.cadence.is_finite()) {
            return Err(field_err(
                "outputs.cadence",
                format!("must be positive, got {}", self.outputs.cadence),
            ));
        }
        for &t in &self.outputs.snapshot_times {
            if !(t >= 0.0 && t <= self.solver.t_end + 1e-12) {
                return Err(field_err("outputs.snapshot_times", format!("{t} lies outside [0, T]")));
            }
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.init.seed.unwrap_or(self.solver.seed)
    }

    /// Initial state on the configured grid.
    pub fn initial_state(&self) -> Result<FlowState> {
        self.initial_state_on(self.solver.n)
    }

    pub fn initial_state_on(&self, n: usize) -> Result<FlowState> {
        let grid = Grid::new(n)?;
        let a = self.init.amplitude;
        let kind = match self.init.kind {
            InitChoice::TaylorGreen => InitKind::TaylorGreen,
            InitChoice::RandomSmooth => InitKind::RandomSmooth,
            InitChoice::ShearBubble => InitKind::ShearBubble,
            InitChoice::Eigenmode => {
                let omega = SpectralField::from_fn(&grid, |x1, _| a * x1.sin());
                return Ok(FlowState::new(omega, SpectralField::zeros(&grid), 0.0)?);
            }
        };
        Ok(make_initial_data(kind, &grid, self.seed(), a))
    }
}

fn default_growth() -> f64 {
    0.5
}

fn default_stability() -> f64 {
    1e-3
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub schema_version: u32,
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub base: ExperimentSpec,
    #[serde(default = "default_workers")]
    pub parallelism: usize,
    /// Coarse grid for the resolution check; defaults to half of `base.solver.N`.
    #[serde(default)]
    pub coarse_n: Option<usize>,
    /// Log-slope (per unit time) of the ladder quantity above which a cell is GROWING.
    #[serde(default = "default_growth")]
    pub growth_threshold: f64,
    /// Largest relative coarse/fine difference of the final ladder value for a stable cell.
    #[serde(default = "default_stability")]
    pub stability_tol: f64,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<SweepSpec> {
        let spec: SweepSpec = serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("sweep: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<SweepSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| field_err(&path.display().to_string(), e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        check_schema(self.schema_version)?;
        check_schema(self.base.schema_version).map_err(|e| field_err("base", e))?;
        self.base.solver.validate().map_err(|e| field_err("base.solver", e))?;
        for (name, grid) in [("alpha_grid", &self.alpha_grid), ("beta_grid", &self.beta_grid)] {
            if let Some(v) = grid.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
                return Err(field_err(name, format!("{v} lies outside (0, 1)")));
            }
        }
        if self.parallelism == 0 {
            return Err(field_err("parallelism", "must be at least 1"));
        }
        let coarse = self.coarse_n();
        if coarse < 8 || !coarse.is_multiple_of(2) || coarse >= self.base.solver.n {
            return Err(field_err(
                "coarse_n",
                format!("{coarse} must be even, >= 8 and below N"),
            ));
        }
        Ok(())
    }

    pub fn coarse_n(&self) -> usize {
        self.coarse_n.unwrap_or(self.base.solver.n / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EIGEN: &str = r#"{
        "schema_version": 1,
        "label": "eigenmode",
        "solver": {"alpha": 0.8, "beta": 0.7, "N": 32, "dt": 0.001, "T": 1.0},
        "init": {"kind": "eigenmode"},
        "outputs": {"dir": "eig", "cadence": 4, "snapshot_times": [0.5]}
    }"#;

    #[test]
    fn config_round_trip() {
        let spec = ExperimentSpec::from_json(EIGEN).unwrap();
        let back = ExperimentSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
        assert_eq!(spec.outputs.cadence, 4.0);
        assert_eq!(spec.init.amplitude, 1.0);
    }

    #[test]
    fn field_level_messages() {
        let bad = EIGEN.replace("\"N\": 32", "\"N\": 33");
        let err = ExperimentSpec::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("solver") && err.contains("N"), "{err}");
        let bad = EIGEN.replace("\"schema_version\": 1", "\"schema_version\": 7");
        assert!(ExperimentSpec::from_json(&bad)
            .unwrap_err()
            .to_string()
            .contains("schema_version"));
        let bad = EIGEN.replace("[0.5]", "[3.0]");
        assert!(ExperimentSpec::from_json(&bad)
            .unwrap_err()
            .to_string()
            .contains("snapshot_times"));
        let bad = EIGEN.replace("\"label\"", "\"lable\"");
        assert!(ExperimentSpec::from_json(&bad).is_err());
    }

    #[test]
    fn sweep_grids_are_checked() {
        let sweep =
            format!(r#"{{"schema_version": 1, "alpha_grid": [0.5, 1.2], "beta_grid": [0.5], "base": {EIGEN}}}"#);
        assert!(SweepSpec::from_json(&sweep)
            .unwrap_err()
            .to_string()
            .contains("alpha_grid"));
        let ok = sweep.replace("1.2", "0.9");
        let s = SweepSpec::from_json(&ok).unwrap();
        assert_eq!(s.coarse_n(), 16);
        assert_eq!(s.parallelism, 1);
    }
}
