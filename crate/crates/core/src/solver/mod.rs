//! Time integration of the vorticity-temperature system
//!
//! `d_t omega + u.grad omega + nu Lambda^alpha omega = d_1 theta`,
//! `d_t theta + u.grad theta + kappa Lambda^beta theta = 0`, `u = grad^perp Delta^-1 omega`,
//!
//! with the dissipation integrated exactly by exponential factors.

mod config;
mod init;
mod run;
mod state;
mod stepper;

pub use config::{Integrator, SolverConfig};
pub use init::{gaussian_bump, make_initial_data, smooth_random, InitKind, XI0};
pub use run::{run, Monitor, RunOptions, RunStatus, Trajectory, BLOW_UP_GROWTH};
pub use state::FlowState;
pub use stepper::{phi_functions, rhs, Rhs, Stepper};
