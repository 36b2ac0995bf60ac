//! Proof-tracked quantities along trajectories: the combined quantity `G`,
//! commutators, energy ladders, max-norm monitors, pointwise lower bounds and
//! the logarithmic velocity-gradient inequality.

mod monitor;
mod quantities;
mod regime;

pub use monitor::{
    default_delta, default_varrho, log_growth_rate, maxnorm_ode_residuals, DiagnosticsConfig, DiagnosticsMonitor,
    DiagnosticsRecord,
};
pub use quantities::{
    combined_quantity, commutator_estimate_check, commutator_rbeta, commutator_rbeta_flux, grad_u_magnitude,
    log_inequality_check, pointwise_bound_check, pointwise_defect, scalar_defect, velocity_lr, LogInequality,
    PointwiseReport, COMMUTATOR_R,
};
pub use regime::{beta_star, regime_classify, Criticality, Regime};
