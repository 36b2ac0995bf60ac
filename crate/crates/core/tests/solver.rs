use std::f64::consts::PI;

use bsq_core::solver::{
    make_initial_data, run, FlowState, InitKind, Integrator, Monitor, RunOptions, RunStatus, SolverConfig,
};
use bsq_core::spectral::{l2_norm, physical_max_abs, Grid, SpectralField};

fn eigenmode(n: usize) -> FlowState {
    let g = Grid::new(n).unwrap();
    FlowState::new(
        SpectralField::from_fn(&g, |x1, _| x1.sin()),
        SpectralField::zeros(&g),
        0.0,
    )
    .unwrap()
}

#[test]
fn eigenmode_decays_exactly() {
    for alpha in [0.3, 0.8, 1.5] {
        let cfg = SolverConfig::new(alpha, 0.7, 32, 1e-3, 1.0);
        let traj = run(&cfg, &eigenmode(32), &mut [], &RunOptions::default()).unwrap();
        assert_eq!(traj.states.len(), 101);
        for s in &traj.states {
            if [0.25, 0.5, 1.0].iter().any(|&t| (s.t - t).abs() < 1e-12) {
                let exact = eigenmode(32).omega.scale((-s.t).exp());
                let err = s.omega.sub(&exact).unwrap().max_coeff() / exact.max_coeff();
                assert!(err < 1e-8, "alpha {alpha} t {}: {err:e}", s.t);
            }
        }
        assert!((traj.last.t - 1.0).abs() < 1e-12);
    }
}

#[test]
fn stratified_temperature_decays_without_flow() {
    let g = Grid::new(32).unwrap();
    let init = FlowState::new(
        SpectralField::zeros(&g),
        SpectralField::from_fn(&g, |_, x2| x2.sin()),
        0.0,
    )
    .unwrap();
    let cfg = SolverConfig {
        kappa: 0.5,
        ..SolverConfig::new(0.6, 0.9, 32, 1e-3, 1.0)
    };
    let traj = run(&cfg, &init, &mut [], &RunOptions::default()).unwrap();
    let exact = init.theta.scale((-0.5f64).exp());
    assert!(traj.last.theta.rel_diff(&exact) < 1e-8);
    assert_eq!(traj.last.omega.max_coeff(), 0.0);
}

#[test]
fn zero_horizon_returns_the_initial_state() {
    let cfg = SolverConfig::new(0.8, 0.7, 16, 1e-2, 0.0);
    let traj = run(&cfg, &eigenmode(16), &mut [], &RunOptions::default()).unwrap();
    assert_eq!(traj.states.len(), 1);
    assert_eq!(traj.steps, 0);
    assert_eq!(traj.last.omega.coeffs(), eigenmode(16).omega.coeffs());
}

#[test]
fn repeat_runs_are_bit_identical() {
    let g = Grid::new(32).unwrap();
    let init = make_initial_data(InitKind::RandomSmooth, &g, 11, 0.5);
    let cfg = SolverConfig::new(0.7, 0.8, 32, 5e-3, 0.2);
    let a = run(&cfg, &init, &mut [], &RunOptions::default()).unwrap();
    let b = run(&cfg, &init, &mut [], &RunOptions::default()).unwrap();
    assert_eq!(a.states.len(), b.states.len());
    for (x, y) in a.states.iter().zip(&b.states) {
        assert_eq!(x.t.to_bits(), y.t.to_bits());
        assert_eq!(x.omega.coeffs(), y.omega.coeffs());
        assert_eq!(x.theta.coeffs(), y.theta.coeffs());
    }
}

struct MeanWatch {
    theta0: f64,
    worst_theta: f64,
    worst_omega: f64,
}

impl Monitor for MeanWatch {
    fn on_step(&mut self, _prev: &FlowState, next: &FlowState) -> bsq_core::Result<()> {
        self.worst_theta = self.worst_theta.max((next.theta.mean() - self.theta0).abs());
        self.worst_omega = self.worst_omega.max(next.omega.mean().abs());
        Ok(())
    }
}

#[test]
fn means_are_conserved() {
    let g = Grid::new(32).unwrap();
    let init = make_initial_data(InitKind::ShearBubble, &g, 0, 1.0);
    let mut watch = MeanWatch {
        theta0: init.theta.mean(),
        worst_theta: 0.0,
        worst_omega: 0.0,
    };
    let cfg = SolverConfig::new(0.5, 0.5, 32, 1e-2, 2.0);
    run(&cfg, &init, &mut [&mut watch], &RunOptions::default()).unwrap();
    assert!(watch.theta0 > 0.0);
    assert!(watch.worst_theta < 1e-13, "{:e}", watch.worst_theta);
    assert_eq!(watch.worst_omega, 0.0);
}

fn final_state(n: usize, integrator: Integrator, dt: f64) -> FlowState {
    let g = Grid::new(n).unwrap();
    let init = make_initial_data(InitKind::RandomSmooth, &g, 4, 0.5);
    let cfg = SolverConfig {
        integrator,
        ..SolverConfig::new(0.8, 0.7, n, dt, 1.0)
    };
    let opts = RunOptions {
        keep_states: false,
        ..RunOptions::default()
    };
    run(&cfg, &init, &mut [], &opts).unwrap().last
}

#[test]
fn refinement_agrees_in_the_resolved_regime() {
    let coarse = final_state(64, Integrator::EtdRk4, 5e-3);
    let fine = final_state(128, Integrator::EtdRk4, 5e-3);
    let diff = coarse.omega.resample(fine.grid()).rel_diff(&fine.omega);
    assert!(diff < 1e-6, "{diff:e}");
    let l2c = l2_norm(&coarse.theta);
    let l2f = l2_norm(&fine.theta);
    assert!((l2c - l2f).abs() / l2f < 1e-6);
}

#[test]
fn integrators_converge_to_each_other() {
    let reference = final_state(32, Integrator::EtdRk4, 1.25e-3);
    let err = |integrator, dt| {
        let s = final_state(32, integrator, dt);
        s.omega
            .rel_diff(&reference.omega)
            .max(s.theta.rel_diff(&reference.theta))
    };
    // first, second and fourth order
    let e1 = (err(Integrator::ImexEuler, 2e-2), err(Integrator::ImexEuler, 1e-2));
    let e2 = (err(Integrator::EtdRk2, 2e-2), err(Integrator::EtdRk2, 1e-2));
    let e4 = (err(Integrator::EtdRk4, 2e-2), err(Integrator::EtdRk4, 1e-2));
    let order = |(a, b): (f64, f64)| (a / b).log2();
    assert!((order(e1) - 1.0).abs() < 0.2, "{e1:?}");
    assert!((order(e2) - 2.0).abs() < 0.3, "{e2:?}");
    assert!(order(e4) > 3.5, "{e4:?}");
    assert!(e1.1 < 1e-2 && e4.1 < 1e-7);
}

#[test]
fn uneven_horizon_ends_exactly() {
    let cfg = SolverConfig::new(0.8, 0.7, 16, 0.03, 0.1);
    let traj = run(&cfg, &eigenmode(16), &mut [], &RunOptions::default()).unwrap();
    assert_eq!(traj.steps, 4);
    assert_eq!(traj.last.t, 0.1);
    let exact = eigenmode(16).omega.scale((-0.1f64).exp());
    assert!(traj.last.omega.rel_diff(&exact) < 1e-12);
}

#[test]
fn non_finite_state_is_flagged_not_raised() {
    let g = Grid::new(16).unwrap();
    let mut init = eigenmode(16);
    init.theta.coeffs_mut()[g.index_of(1, 1).unwrap()] = num_complex::Complex64::new(f64::NAN, 0.0);
    let cfg = SolverConfig::new(0.8, 0.7, 16, 1e-2, 1.0);
    let traj = run(&cfg, &init, &mut [], &RunOptions::default()).unwrap();
    match traj.status {
        RunStatus::Unresolved { t, .. } => assert!((t - 0.01).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
    assert!(!traj.is_resolved());
    assert_eq!(traj.steps, 0);
}

#[test]
fn buoyancy_spins_up_vorticity_linearly() {
    let g = Grid::new(16).unwrap();
    let init = FlowState::new(
        SpectralField::zeros(&g),
        SpectralField::from_fn(&g, |x1, _| x1.cos()),
        0.0,
    )
    .unwrap();
    let cfg = SolverConfig {
        nu: 0.0,
        kappa: 0.0,
        ..SolverConfig::new(1.0, 1.0, 16, 1e-3, 1.0)
    };
    let traj = run(&cfg, &init, &mut [], &RunOptions::default()).unwrap();
    // omega = -t sin x1 is a steady shear that does not advect cos x1
    let exact = SpectralField::from_fn(&g, |x1, _| -x1.sin());
    assert!(traj.last.omega.rel_diff(&exact) < 1e-12);
    assert!((physical_max_abs(&traj.last.theta) - 1.0).abs() < 1e-12);
    assert!((l2_norm(&traj.last.theta) - (2.0 * PI * PI).sqrt()).abs() < 1e-12);
}

#[test]
fn cfl_violation_mid_run_is_unresolved() {
    let cfg = SolverConfig::new(0.5, 0.5, 32, 0.01, 1.0);
    let init = make_initial_data(InitKind::ShearBubble, &Grid::new(32).unwrap(), 0, 1e6);
    let traj = run(&cfg, &init, &mut [], &RunOptions::default()).unwrap();
    match traj.status {
        RunStatus::Unresolved { t, ref reason } => {
            assert!((t - 0.01).abs() < 1e-12);
            assert!(reason.contains("CFL"));
        }
        RunStatus::Completed => panic!("expected an unresolved run"),
    }
    // a violation at the very first step is a configuration error
    let fast = make_initial_data(InitKind::TaylorGreen, &Grid::new(32).unwrap(), 0, 1e6);
    assert!(run(&cfg, &fast, &mut [], &RunOptions::default()).is_err());
}
