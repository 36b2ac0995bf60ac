//! One experiment: trajectory, diagnostics, snapshots and manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bsq_core::diagnostics::{DiagnosticsMonitor, DiagnosticsRecord};
use bsq_core::snapshot::{Snapshot, SnapshotHeader};
use bsq_core::solver::{run, FlowState, Monitor, RunOptions, RunStatus, SolverConfig};
use serde::Serialize;

use crate::error::{HarnessError, Result};
use crate::output::{version_string, write_diagnostics_csv, write_json};
use crate::spec::ExperimentSpec;

/// Writes a `.bsq` snapshot at the first step reaching each requested time.
pub struct SnapshotWriter {
    dir: PathBuf,
    cfg: SolverConfig,
    pending: Vec<f64>,
    written: Vec<String>,
}

impl SnapshotWriter {
    pub fn new(dir: &Path, cfg: &SolverConfig, times: &[f64]) -> SnapshotWriter {
        let mut pending = times.to_vec();
        pending.sort_by(|a, b| b.total_cmp(a));
        pending.dedup();
        SnapshotWriter {
            dir: dir.to_path_buf(),
            cfg: cfg.clone(),
            pending,
            written: Vec::new(),
        }
    }

    pub fn written(&self) -> &[String] {
        &self.written
    }

    fn offer(&mut self, s: &FlowState) -> bsq_core::Result<()> {
        let eps = 1e-9 * self.cfg.dt;
        while self.pending.last().is_some_and(|&t| t <= s.t + eps) {
            let requested = self.pending.pop().expect("non-empty");
            let name = format!("snapshot_t{requested:.6}.bsq");
            let snap = Snapshot {
                header: SnapshotHeader {
                    n: s.n(),
                    alpha: self.cfg.alpha,
                    beta: self.cfg.beta,
                    nu: self.cfg.nu,
                    kappa: self.cfg.kappa,
                    t: s.t,
                    field_order: vec!["omega".into(), "theta".into()],
                },
                fields: vec![s.omega.clone(), s.theta.clone()],
            };
            snap.write(&self.dir.join(&name))?;
            self.written.push(name);
        }
        Ok(())
    }
}

impl Monitor for SnapshotWriter {
    fn on_step(&mut self, _prev: &FlowState, next: &FlowState) -> bsq_core::Result<()> {
        self.offer(next)
    }

    fn on_sample(&mut self, state: &FlowState) -> bsq_core::Result<()> {
        self.offer(state)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub label: String,
    pub version: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unresolved_at: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub steps: usize,
    pub t_final: f64,
    pub n_records: usize,
    pub seed: u64,
    pub wall_time_s: f64,
    pub diagnostics: String,
    pub snapshots: Vec<String>,
    pub config: ExperimentSpec,
}

#[derive(Debug)]
pub struct Outcome {
    pub records: Vec<DiagnosticsRecord>,
    pub status: RunStatus,
    pub manifest: Manifest,
    pub last: FlowState,
}

/// Runs without touching the filesystem.
pub fn integrate(
    spec: &ExperimentSpec,
    snapshots: Option<&mut SnapshotWriter>,
) -> Result<(Vec<DiagnosticsRecord>, bsq_core::solver::Trajectory)> {
    spec.validate()?;
    let init = spec.initial_state()?;
    let mut diag = DiagnosticsMonitor::new(&spec.solver, spec.diagnostics.clone())?;
    let opts = RunOptions {
        cadence: spec.outputs.cadence,
        keep_states: false,
    };
    let traj = match snapshots {
        Some(w) => run(&spec.solver, &init, &mut [&mut diag, w], &opts)?,
        None => run(&spec.solver, &init, &mut [&mut diag], &opts)?,
    };
    Ok((diag.into_records(), traj))
}

/// Runs `spec` and writes `diagnostics.csv`, snapshots and `manifest.json`
/// into `spec.outputs.dir`.
pub fn simulate(spec: &ExperimentSpec) -> Result<Outcome> {
    spec.validate()?;
    let dir = &spec.outputs.dir;
    fs::create_dir_all(dir)
        .map_err(|e| HarnessError::Invalid(format!("outputs.dir: cannot create {}: {e}", dir.display())))?;
    let start = Instant::now();
    let mut writer = SnapshotWriter::new(dir, &spec.solver, &spec.outputs.snapshot_times);
    let (records, traj) = integrate(spec, Some(&mut writer))?;
    let csv_name = "diagnostics.csv";
    write_diagnostics_csv(&dir.join(csv_name), &spec.diagnostics.r_list, &records)?;
    let (status, unresolved_at, reason) = match &traj.status {
        RunStatus::Completed => ("completed", None, None),
        RunStatus::Unresolved { t, reason } => ("unresolved", Some(*t), Some(reason.clone())),
    };
    let manifest = Manifest {
        label: spec.label.clone(),
        version: version_string(),
        status: status.into(),
        unresolved_at,
        reason,
        steps: traj.steps,
        t_final: traj.last.t,
        n_records: records.len(),
        seed: spec.seed(),
        wall_time_s: start.elapsed().as_secs_f64(),
        diagnostics: csv_name.into(),
        snapshots: writer.written().to_vec(),
        config: spec.clone(),
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(Outcome {
        records,
        status: traj.status,
        manifest,
        last: traj.last,
    })
}
