use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::state::FlowState;
use super::stepper::Stepper;
use crate::error::{Error, Result};
use crate::spectral::physical_max_abs;

/// Growth of `max |omega|` (relative to the initial data) treated as loss of
/// resolution.
pub const BLOW_UP_GROWTH: f64 = 1e6;

/// Hooks invoked by [`run`]: once per step and once per sample.
pub trait Monitor {
    fn on_step(&mut self, _prev: &FlowState, _next: &FlowState) -> Result<()> {
        Ok(())
    }

    fn on_sample(&mut self, _state: &FlowState) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Samples per unit time.
    pub cadence: f64,
    pub keep_states: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            cadence: 100.0,
            keep_states: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    /// Non-finite values, runaway vorticity or a CFL violation after the
    /// first step, at time `t`.
    Unresolved {
        t: f64,
        reason: String,
    },
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub config: SolverConfig,
    pub states: Vec<FlowState>,
    pub sample_times: Vec<f64>,
    pub steps: usize,
    pub status: RunStatus,
    pub last: FlowState,
}

impl Trajectory {
    pub fn is_resolved(&self) -> bool {
        self.status == RunStatus::Completed
    }
}

/// Integrates `init` over the horizon `cfg.t_end`. The final step is
/// shortened when the horizon is not a multiple of `dt`.
pub fn run(
    cfg: &SolverConfig,
    init: &FlowState,
    monitors: &mut [&mut dyn Monitor],
    opts: &RunOptions,
) -> Result<Trajectory> {
    cfg.validate()?;
    if init.n() != cfg.n {
        return Err(Error::GridMismatch(cfg.n, init.n()));
    }
    if !(opts.cadence > 0.0 && opts.cadence.is_finite()) {
        return Err(crate::error::invalid(
            "cadence",
            format!("must be positive, got {}", opts.cadence),
        ));
    }
    let full_steps = (cfg.t_end / cfg.dt + 1e-9).floor() as usize;
    let remainder = cfg.t_end - full_steps as f64 * cfg.dt;
    let tail = (remainder > 1e-12 * cfg.t_end.max(1.0)).then_some(remainder);
    let every = ((1.0 / (opts.cadence * cfg.dt)).round() as usize).max(1);
    let main = Stepper::new(cfg)?;

    let reference = physical_max_abs(&init.omega).max(physical_max_abs(&init.theta));
    let t0 = init.t;
    let mut traj = Trajectory {
        config: cfg.clone(),
        states: Vec::new(),
        sample_times: Vec::new(),
        steps: 0,
        status: RunStatus::Completed,
        last: init.clone(),
    };
    let sample = |traj: &mut Trajectory, s: &FlowState, monitors: &mut [&mut dyn Monitor]| -> Result<()> {
        for m in monitors.iter_mut() {
            m.on_sample(s)?;
        }
        traj.sample_times.push(s.t);
        if opts.keep_states {
            traj.states.push(s.clone());
        }
        Ok(())
    };
    sample(&mut traj, init, monitors)?;

    let total = full_steps + tail.is_some() as usize;
    let mut state = init.clone();
    for i in 0..total {
        let stepped = if i < full_steps {
            main.step(&state).map(|mut s| {
                s.t = t0 + (i + 1) as f64 * cfg.dt;
                s
            })
        } else {
            Stepper::with_step(cfg, tail.unwrap_or(cfg.dt))?
                .step(&state)
                .map(|mut s| {
                    s.t = t0 + cfg.t_end;
                    s
                })
        };
        let next = match stepped {
            Ok(s) => s,
            Err(Error::NonFinite { t }) => {
                traj.status = RunStatus::Unresolved {
                    t,
                    reason: "non-finite values".into(),
                };
                break;
            }
            // after the first step a CFL violation means the flow outran the grid
            Err(Error::Cfl { dt, suggested }) if i > 0 => {
                traj.status = RunStatus::Unresolved {
                    t: state.t,
                    reason: format!("advective CFL limit exceeded (dt {dt:e}, limit {suggested:e})"),
                };
                break;
            }
            Err(e) => return Err(e),
        };
        for m in monitors.iter_mut() {
            m.on_step(&state, &next)?;
        }
        traj.steps += 1;
        state = next;
        let last = i + 1 == total;
        if (i + 1) % every == 0 || last {
            if reference > 0.0 && physical_max_abs(&state.omega) > BLOW_UP_GROWTH * reference {
                traj.status = RunStatus::Unresolved {
                    t: state.t,
                    reason: format!("max |omega| grew beyond {BLOW_UP_GROWTH:e} times its initial scale"),
                };
                sample(&mut traj, &state, monitors)?;
                break;
            }
            sample(&mut traj, &state, monitors)?;
        }
    }
    traj.last = state;
    Ok(traj)
}
