//! Parameter sweeps over `(alpha, beta)` and the regime atlas.

use std::fs;
use std::path::Path;

use bsq_core::census::rel_change;
use bsq_core::diagnostics::{log_growth_rate, regime_classify, DiagnosticsRecord};
use bsq_core::solver::RunStatus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::output::{fmt_f64, write_diagnostics_csv};
use crate::simulate::integrate;
use crate::spec::{ExperimentSpec, SweepSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Bounded,
    Growing,
    Unresolved,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "BOUNDED",
            Verdict::Growing => "GROWING",
            Verdict::Unresolved => "UNRESOLVED",
        })
    }
}

/// Energy ladder tracked in a cell: `e1` below `alpha = 2/3`, `e2` above.
pub fn ladder_name(alpha: f64) -> &'static str {
    if alpha <= 2.0 / 3.0 {
        "e1"
    } else {
        "e2"
    }
}

fn ladder(alpha: f64, r: &DiagnosticsRecord) -> f64 {
    if alpha <= 2.0 / 3.0 {
        r.e1
    } else {
        r.e2
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtlasRow {
    pub alpha: f64,
    pub beta: f64,
    pub regime: String,
    pub covered: bool,
    pub beta_star: f64,
    pub ladder: String,
    pub max_linf_omega: f64,
    pub max_linf_theta: f64,
    pub max_linf_grad_theta: f64,
    pub max_grad_u_linf: f64,
    pub ladder_final: f64,
    pub ladder_slope: f64,
    pub worst_energy_residual: f64,
    pub coarse_rel_diff: f64,
    pub n_stable: bool,
    pub verdict: Verdict,
    pub note: String,
}

pub const ATLAS_HEADER: [&str; 17] = [
    "alpha",
    "beta",
    "regime",
    "covered",
    "beta_star",
    "ladder",
    "max_linf_omega",
    "max_linf_theta",
    "max_linf_grad_theta",
    "max_grad_u_linf",
    "ladder_final",
    "ladder_slope",
    "worst_energy_residual",
    "coarse_rel_diff",
    "n_stable",
    "verdict",
    "note",
];

impl AtlasRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            fmt_f64(self.alpha),
            fmt_f64(self.beta),
            self.regime.clone(),
            if self.covered { "COVERED" } else { "NOT_COVERED" }.into(),
            fmt_f64(self.beta_star),
            self.ladder.clone(),
            fmt_f64(self.max_linf_omega),
            fmt_f64(self.max_linf_theta),
            fmt_f64(self.max_linf_grad_theta),
            fmt_f64(self.max_grad_u_linf),
            fmt_f64(self.ladder_final),
            fmt_f64(self.ladder_slope),
            fmt_f64(self.worst_energy_residual),
            fmt_f64(self.coarse_rel_diff),
            self.n_stable.to_string(),
            self.verdict.to_string(),
            self.note.clone(),
        ]
    }
}

fn max_of(records: &[DiagnosticsRecord], f: impl Fn(&DiagnosticsRecord) -> f64) -> f64 {
    records.iter().map(f).fold(0.0, f64::max)
}

fn cell_spec(sweep: &SweepSpec, alpha: f64, beta: f64, n: usize) -> ExperimentSpec {
    let mut spec = sweep.base.clone();
    spec.solver.alpha = alpha;
    spec.solver.beta = beta;
    spec.solver.n = n;
    spec.label = format!("{} alpha={alpha} beta={beta} N={n}", sweep.base.label);
    spec.outputs.snapshot_times.clear();
    spec
}

/// Runs one cell at the base and coarse resolutions. Failures become
/// `UNRESOLVED` rows; `cell_dir` receives the fine-grid diagnostics.
pub fn run_cell(sweep: &SweepSpec, alpha: f64, beta: f64, cell_dir: Option<&Path>) -> Result<AtlasRow> {
    let regime = regime_classify(alpha, beta)?;
    let mut row = AtlasRow {
        alpha,
        beta,
        regime: regime.criticality.to_string(),
        covered: regime.covered,
        beta_star: regime.beta_star,
        ladder: ladder_name(alpha).into(),
        max_linf_omega: f64::NAN,
        max_linf_theta: f64::NAN,
        max_linf_grad_theta: f64::NAN,
        max_grad_u_linf: f64::NAN,
        ladder_final: f64::NAN,
        ladder_slope: f64::NAN,
        worst_energy_residual: f64::NAN,
        coarse_rel_diff: f64::NAN,
        n_stable: false,
        verdict: Verdict::Unresolved,
        note: String::new(),
    };
    let fine_spec = cell_spec(sweep, alpha, beta, sweep.base.solver.n);
    let (fine, traj) = match integrate(&fine_spec, None) {
        Ok(v) => v,
        Err(e) => {
            row.note = format!("fine run failed: {e}");
            return Ok(row);
        }
    };
    if let Some(dir) = cell_dir {
        write_diagnostics_csv(
            &dir.join(format!("cell_a{alpha}_b{beta}.csv")),
            &fine_spec.diagnostics.r_list,
            &fine,
        )?;
    }
    row.max_linf_omega = max_of(&fine, |r| r.linf_omega);
    row.max_linf_theta = max_of(&fine, |r| r.linf_theta);
    row.max_linf_grad_theta = max_of(&fine, |r| r.linf_grad_theta);
    row.max_grad_u_linf = max_of(&fine, |r| r.grad_u_linf);
    row.worst_energy_residual = max_of(&fine, |r| r.worst_energy_residual());
    if let RunStatus::Unresolved { t, reason } = &traj.status {
        row.note = format!("{reason} at t={t}");
        return Ok(row);
    }
    let times: Vec<f64> = fine.iter().map(|r| r.t).collect();
    let values: Vec<f64> = fine.iter().map(|r| ladder(alpha, r)).collect();
    row.ladder_final = *values.last().expect("initial sample");
    row.ladder_slope = log_growth_rate(&times, &values).unwrap_or(0.0);

    let coarse_spec = cell_spec(sweep, alpha, beta, sweep.coarse_n());
    match integrate(&coarse_spec, None) {
        Ok((coarse, ct)) if ct.is_resolved() => {
            let c_final = coarse.last().map(|r| ladder(alpha, r)).unwrap_or(f64::NAN);
            row.coarse_rel_diff = rel_change(row.ladder_final, c_final);
            row.n_stable = row.coarse_rel_diff <= sweep.stability_tol;
        }
        Ok((_, ct)) => row.note = format!("coarse run unresolved: {:?}", ct.status),
        Err(e) => row.note = format!("coarse run failed: {e}"),
    }

    let tol = sweep.base.diagnostics.tolerance;
    row.verdict = if row.ladder_slope > sweep.growth_threshold {
        Verdict::Growing
    } else if !row.n_stable {
        if row.note.is_empty() {
            row.note = "ladder not stable under refinement".into();
        }
        Verdict::Unresolved
    } else if !(row.worst_energy_residual <= tol) {
        row.note = format!("energy-law residual {:e} above {tol:e}", row.worst_energy_residual);
        Verdict::Unresolved
    } else {
        Verdict::Bounded
    };
    Ok(row)
}

/// Runs every cell (row-major in `beta_grid`, then `alpha_grid`) on a pool of
/// `workers` threads. Row order and content do not depend on `workers`.
pub fn run_sweep(sweep: &SweepSpec, workers: usize, cell_dir: Option<&Path>) -> Result<Vec<AtlasRow>> {
    sweep.validate()?;
    if let Some(d) = cell_dir {
        fs::create_dir_all(d)?;
    }
    let cells: Vec<(f64, f64)> = sweep
        .alpha_grid
        .iter()
        .flat_map(|&a| sweep.beta_grid.iter().map(move |&b| (a, b)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Invalid(format!("workers: {e}")))?;
    pool.install(|| {
        cells
            .par_iter()
            .map(|&(a, b)| run_cell(sweep, a, b, cell_dir))
            .collect::<Result<Vec<_>>>()
    })
}

pub fn write_atlas(path: &Path, rows: &[AtlasRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(ATLAS_HEADER)?;
    for r in rows {
        w.write_record(r.fields())?;
    }
    w.flush()?;
    Ok(())
}
