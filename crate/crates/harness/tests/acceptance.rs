//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use bsq_core::census::rel_change;
use bsq_core::diagnostics::{beta_star, DiagnosticsConfig, DiagnosticsMonitor};
use bsq_core::solver::{make_initial_data, run, FlowState, InitKind, RunOptions, SolverConfig};
use bsq_core::spectral::{dealiased_product, random_field, Grid, SpectralField};
use bsq_harness::spec::{ExperimentSpec, SweepSpec};
use bsq_harness::sweep::{run_sweep, Verdict};
use bsq_harness::verify::{pointwise_census, run_suites, SuiteReport, VerifyOptions};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn suite(name: &str, trials: Option<usize>) -> SuiteReport {
    let opts = VerifyOptions {
        trials,
        ..Default::default()
    };
    run_suites(name, &opts).expect("suite runs").remove(0)
}

fn worst(report: &SuiteReport, prefix: &str) -> (f64, bool) {
    report
        .properties
        .iter()
        .filter(|p| p.name.starts_with(prefix))
        .fold((0.0f64, true), |(v, ok), p| (v.max(p.value), ok && p.passed))
}

fn operator_identities() -> Outcome {
    let r = suite("operators", None);
    let mut detail = Vec::new();
    let mut ok = true;
    for prefix in [
        "transform_round_trip",
        "lambda_semigroup",
        "biot_savart_curl_inverse",
        "g_recombination",
        "divergence_free",
    ] {
        let (v, pass) = worst(&r, prefix);
        ok &= pass && v < 1e-10;
        detail.push(format!("{prefix} {v:.1e}"));
    }
    outcome(ok, format!("N in {{16, 64}}: {} (limit 1e-10)", detail.join(", ")))
}

fn closed_form_decay() -> Outcome {
    let grid = Grid::new(32).unwrap();
    let mut cfg = SolverConfig::new(0.8, 0.7, 32, 1e-3, 1.0);
    cfg.kappa = 0.5;
    let opts = RunOptions {
        cadence: 1.0,
        keep_states: false,
    };
    let omega0 = SpectralField::from_fn(&grid, |x1, _| x1.sin());
    let s = FlowState::new(omega0.clone(), SpectralField::zeros(&grid), 0.0).unwrap();
    let w = run(&cfg, &s, &mut [], &opts).unwrap().last;
    let ew = w.omega.rel_diff(&omega0.scale((-1.0f64).exp()));
    let theta0 = SpectralField::from_fn(&grid, |_, x2| x2.sin());
    let s = FlowState::new(SpectralField::zeros(&grid), theta0.clone(), 0.0).unwrap();
    let th = run(&cfg, &s, &mut [], &opts).unwrap().last;
    let et = th.theta.rel_diff(&theta0.scale((-0.5f64).exp()));
    outcome(
        ew < 1e-8 && et < 1e-8,
        format!("ETD-RK4 N=32 dt=1e-3 t=1: omega {ew:.2e}, theta (kappa=0.5) {et:.2e} (limit 1e-8)"),
    )
}

/// Direct double sum over retained mode pairs.
fn convolution(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let grid = f.grid().clone();
    let n = grid.n() as i64;
    let cut = (n - 1) / 3;
    let kept = |k: i64| k.abs() <= cut;
    for idx in 0..grid.len() {
        let (k1, k2) = grid.mode(idx);
        assert_eq!(grid.is_retained(idx), kept(k1) && kept(k2));
    }
    let mut out = SpectralField::zeros(&grid);
    for p1 in -cut..=cut {
        for p2 in -cut..=cut {
            for q1 in -cut..=cut {
                for q2 in -cut..=cut {
                    let (k1, k2) = (p1 + q1, p2 + q2);
                    if kept(k1) && kept(k2) {
                        let idx = grid.index_of(k1, k2).unwrap();
                        out.coeffs_mut()[idx] += f.coeff(p1, p2) * g.coeff(q1, q2);
                    }
                }
            }
        }
    }
    out
}

fn product_vs_convolution() -> Outcome {
    let grid = Grid::new(16).unwrap();
    let mut err = 0.0f64;
    for seed in 0..5 {
        let f = random_field(&grid, seed, 5, |_| 1.0);
        let g = random_field(&grid, seed + 100, 5, |k| 1.0 / k);
        let fast = dealiased_product(&f, &g).unwrap();
        let slow = convolution(&f, &g);
        err = err.max(fast.rel_diff(&slow));
    }
    outcome(
        err < 1e-12,
        format!("N=16, 5 random pairs: residual {err:.2e} (limit 1e-12)"),
    )
}

/// Largest energy-law residual along one run.
fn energy_residual(n: usize, dt: f64, seed: u64) -> (f64, bool) {
    let mut cfg = SolverConfig::new(0.8, 0.7, n, dt, 2.0);
    cfg.seed = seed;
    let init = make_initial_data(InitKind::RandomSmooth, &Grid::new(n).unwrap(), seed, 1.0);
    let mut diag = DiagnosticsMonitor::new(&cfg, DiagnosticsConfig::default()).unwrap();
    let traj = run(
        &cfg,
        &init,
        &mut [&mut diag],
        &RunOptions {
            cadence: 10.0,
            keep_states: false,
        },
    )
    .unwrap();
    let r = diag
        .into_records()
        .iter()
        .map(|r| r.worst_energy_residual())
        .fold(f64::NEG_INFINITY, f64::max);
    (r, traj.is_resolved())
}

fn energy_laws() -> Outcome {
    // the control keeps the CFL number of the resolved runs: dt * N fixed
    let (n, dt) = (128, 4e-3);
    let (nc, dtc) = (16, 4e-3 * 128.0 / 16.0);
    let mut ok = true;
    let mut resolved = Vec::new();
    let mut control = Vec::new();
    for seed in 1..=5 {
        let (r, fine_ok) = energy_residual(n, dt, seed);
        let (c, _) = energy_residual(nc, dtc, seed);
        ok &= fine_ok && r <= 1e-4 && c > r;
        resolved.push(r);
        control.push(c);
    }
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" ");
    outcome(
        ok,
        format!(
            "N=128 dt={dt} residuals [{}] (limit 1e-4); N=16 dt={dtc} control [{}] larger",
            fmt(&resolved),
            fmt(&control)
        ),
    )
}

fn pointwise_defect() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for beta in [0.3, 0.5, 0.8] {
        let (d64, r64) = pointwise_census(64, beta, 100, 0).unwrap();
        let (_, r128) = pointwise_census(128, beta, 100, 0).unwrap();
        let drift = rel_change(r64.min_ratio, r128.min_ratio);
        ok &= d64.min_ratio >= -1e-10 && r64.min_ratio > 0.0 && drift <= 0.2;
        detail.push(format!(
            "beta={beta}: min D/scale {:.2e}, c1 {:.4} -> {:.4} ({:.1}%)",
            d64.min_ratio,
            r64.min_ratio,
            r128.min_ratio,
            100.0 * drift
        ));
    }
    outcome(ok, format!("100 fields at N=64: {}", detail.join("; ")))
}

fn littlewood_paley() -> Outcome {
    let r = suite("bernstein", None);
    let (pu, pu_ok) = worst(&r, "partition_of_unity");
    let (rec, rec_ok) = worst(&r, "block_reconstruction");
    let (spread, spread_ok) = worst(&r, "bernstein_j_spread");
    let (drift, drift_ok) = worst(&r, "besov_sobolev_refinement_drift");
    let (c, big_c) = (0.25, 1.5);
    let in_band = r
        .censuses
        .iter()
        .filter(|c| c.check_name == "besov_sobolev_equivalence")
        .all(|x| x.min_ratio >= c && x.max_ratio <= big_c);
    let band: Vec<String> = r
        .censuses
        .iter()
        .map(|x| format!("[{:.3}, {:.3}]", x.min_ratio, x.max_ratio))
        .collect();
    outcome(
        pu_ok && pu < 1e-12 && rec_ok && spread_ok && spread <= 0.1 && drift_ok && in_band,
        format!(
            "partition {pu:.1e}, reconstruction {rec:.1e}, Bernstein j-spread {:.1}% (limit 10%), B/H ratios {} within [{c}, {big_c}], drift {drift:.1e}",
            100.0 * spread,
            band.join(" ")
        ),
    )
}

fn commutator() -> Outcome {
    let r = suite("commutator", Some(50));
    let (routes, routes_ok) = worst(&r, "commutator_routes");
    let (_, finite_ok) = worst(&r, "commutator_estimate_finite");
    let (drift, drift_ok) = worst(&r, "commutator_estimate_refinement_drift");
    outcome(
        routes_ok && routes < 1e-12 && finite_ok && drift_ok,
        format!("50 trials x beta in {{0.3, 0.5, 0.8}}: routes {routes:.1e} (limit 1e-12), census finite, N 64->128 drift {drift:.1e}"),
    )
}

fn classifier() -> Outcome {
    let b08 = beta_star(0.8).unwrap();
    let b05 = beta_star(0.5).unwrap();
    let eps = 1e-13;
    let jump = (beta_star(2.0 / 3.0 - eps).unwrap() - beta_star(2.0 / 3.0 + eps).unwrap()).abs();
    let e1 = (b08 - 0.6).abs();
    let e2 = (b05 - 15.0 / 22.0).abs();
    outcome(
        e1 < 1e-12 && e2 < 1e-12 && jump < 1e-12,
        format!("beta*(0.8) err {e1:.1e}, beta*(0.5) = {b05:.12} err {e2:.1e}, jump at 2/3 {jump:.1e}"),
    )
}

fn evidence_sweep() -> Outcome {
    let base = ExperimentSpec::from_json(
        r#"{"schema_version": 1, "label": "evidence",
            "solver": {"alpha": 0.8, "beta": 0.7, "N": 128, "dt": 0.005, "T": 3.0, "seed": 7},
            "init": {"kind": "random_smooth", "amplitude": 1.0},
            "outputs": {"cadence": 10}}"#,
    )
    .unwrap();
    let sweep = SweepSpec {
        schema_version: 1,
        alpha_grid: vec![0.4, 0.6, 0.7, 0.9],
        beta_grid: vec![0.4, 0.6, 0.72, 0.9],
        base,
        parallelism: 2,
        coarse_n: Some(64),
        growth_threshold: 0.5,
        stability_tol: 1e-3,
    };
    sweep.validate().unwrap();
    let first = run_sweep(&sweep, 1, None).unwrap();
    let second = run_sweep(&sweep, 2, None).unwrap();
    let same = first.len() == second.len() && first.iter().zip(&second).all(|(a, b)| a.fields() == b.fields());
    let covered: Vec<_> = first.iter().filter(|r| r.covered).collect();
    let good = covered.iter().all(|r| r.verdict == Verdict::Bounded && r.n_stable);
    let tally = |v: Verdict| first.iter().filter(|r| r.verdict == v).count();
    outcome(
        same && good && !covered.is_empty(),
        format!(
            "4x4 grid N=128 T=3: {} covered cells all BOUNDED and N-stable: {good}; verdicts {} BOUNDED / {} GROWING / {} UNRESOLVED; atlas identical across runs: {same}",
            covered.len(),
            tally(Verdict::Bounded),
            tally(Verdict::Growing),
            tally(Verdict::Unresolved)
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "1 operator identity suite",
            operator_identities,
            Duration::from_secs(60),
        ),
        ("2 closed-form dynamics", closed_form_decay, Duration::from_secs(10)),
        (
            "3 dealiased product vs convolution",
            product_vs_convolution,
            Duration::from_secs(30),
        ),
        (
            "4 energy laws and under-resolved control",
            energy_laws,
            Duration::from_secs(600),
        ),
        ("5 pointwise defect", pointwise_defect, Duration::from_secs(300)),
        ("6 Littlewood-Paley suite", littlewood_paley, Duration::from_secs(300)),
        ("7 commutator", commutator, Duration::from_secs(300)),
        ("8 regime classifier", classifier, Duration::from_secs(1)),
        ("9 evidence sweep", evidence_sweep, Duration::from_secs(3600)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let o = check();
        let elapsed = start.elapsed();
        let pass = o.passed && elapsed <= budget;
        failed += !pass as usize;
        println!(
            "{} [{name}] {} ({:.1}s, budget {}s)",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
