//! Property censuses behind `bsq verify`.

use std::time::Instant;

use bsq_core::census::Census;
use bsq_core::diagnostics::{
    commutator_estimate_check, commutator_rbeta, commutator_rbeta_flux, pointwise_bound_check, DiagnosticsMonitor,
};
use bsq_core::harmonic::{
    bernstein_check, besov_sobolev_census, family_params, gn_census, multiscale_field, AnnulusFamily, BernsteinCase,
    DyadicBank, FAMILY_KMAX,
};
use bsq_core::solver::{run, smooth_random, FlowState, RunOptions, SolverConfig};
use bsq_core::spectral::{
    biot_savart, dealiased_product, fractional_laplacian, random_field, riesz_beta, velocity_split, Grid, SpectralField,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{HarnessError, Result};

pub const SUITES: [&str; 6] = ["operators", "bernstein", "gn", "commutator", "pointwise", "energy"];

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Overrides each suite's default trial count.
    pub trials: Option<usize>,
    pub seed: u64,
    /// Restricts `pointwise` and `commutator` to one exponent.
    pub beta: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Property {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    /// Inputs needed to replay the worst case.
    pub inputs: serde_json::Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub elapsed_s: f64,
    pub properties: Vec<Property>,
    pub censuses: Vec<Census>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Property> {
        self.properties.iter().filter(|p| !p.passed)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{}: {} ({} properties, {:.1}s)\n",
            self.suite,
            if self.passed { "PASS" } else { "FAIL" },
            self.properties.len(),
            self.elapsed_s
        );
        for p in &self.properties {
            s.push_str(&format!(
                "  [{}] {} = {:.3e} (limit {:.1e}) {}\n",
                if p.passed { "ok" } else { "FAIL" },
                p.name,
                p.value,
                p.threshold,
                p.inputs
            ));
        }
        for c in &self.censuses {
            s.push_str(&format!(
                "  census {} N={} trials={} ratio in [{:.4e}, {:.4e}]\n",
                c.check_name, c.n, c.n_trials, c.min_ratio, c.max_ratio
            ));
        }
        s
    }
}

/// Tracks the worst value of a quantity that must stay below `threshold`.
struct Worst {
    name: String,
    threshold: f64,
    value: f64,
    inputs: serde_json::Value,
}

impl Worst {
    fn new(name: impl Into<String>, threshold: f64) -> Worst {
        Worst {
            name: name.into(),
            threshold,
            value: 0.0,
            inputs: serde_json::Value::Null,
        }
    }

    fn see(&mut self, v: f64, inputs: serde_json::Value) {
        if self.value.is_nan() {
            return;
        }
        if v.is_nan() || v > self.value || self.inputs.is_null() {
            self.value = v;
            self.inputs = inputs;
        }
    }

    fn done(self) -> Property {
        Property {
            passed: self.value <= self.threshold,
            name: self.name,
            value: self.value,
            threshold: self.threshold,
            inputs: self.inputs,
        }
    }
}

fn property(name: impl Into<String>, value: f64, threshold: f64, inputs: serde_json::Value) -> Property {
    Property {
        name: name.into(),
        passed: value <= threshold,
        value,
        threshold,
        inputs,
    }
}

fn seeded_field(grid: &std::sync::Arc<Grid>, seed: u64) -> SpectralField {
    random_field(grid, seed, (grid.n() as i64 - 1) / 3, |k| (1.0 + k * k).powf(-0.75))
}

/// Reference convolution `sum_{p+q=k} f(p) g(q)` over retained modes,
/// truncated to the retained set.
pub fn brute_force_product(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let grid = f.grid().clone();
    let retained: Vec<usize> = (0..grid.len()).filter(|&i| grid.is_retained(i)).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for &i in &retained {
        let (p1, p2) = grid.mode(i);
        for &j in &retained {
            let (q1, q2) = grid.mode(j);
            if let Some(k) = grid.index_of(p1 + q1, p2 + q2) {
                if grid.is_retained(k) {
                    out[k] += f.coeffs()[i] * g.coeffs()[j];
                }
            }
        }
    }
    SpectralField::from_coeffs(&grid, out).expect("grid-sized")
}

fn operators(opts: &VerifyOptions) -> Result<(Vec<Property>, Vec<Census>)> {
    let trials = opts.trials.unwrap_or(10);
    let mut props = Vec::new();
    for n in [16usize, 64] {
        let grid = Grid::new(n)?;
        let mut round = Worst::new(format!("transform_round_trip_N{n}"), 1e-10);
        let mut semi = Worst::new(format!("lambda_semigroup_N{n}"), 1e-10);
        let mut curl = Worst::new(format!("biot_savart_curl_inverse_N{n}"), 1e-10);
        let mut div = Worst::new(format!("divergence_free_N{n}"), 1e-10);
        let mut recomb = Worst::new(format!("g_recombination_N{n}"), 1e-10);
        for t in 0..trials {
            let seed = opts.seed.wrapping_add(t as u64);
            let inputs = json!({"N": n, "seed": seed});
            let f = seeded_field(&grid, seed);
            let back = SpectralField::from_physical(&grid, &f.to_physical())?;
            round.see(back.rel_diff(&f), inputs.clone());

            let a = 0.1 + 1.4 * ((t * 37) % 11) as f64 / 10.0;
            let b = 0.1 + 1.4 * ((t * 53) % 13) as f64 / 12.0;
            let lhs = fractional_laplacian(&fractional_laplacian(&f, a)?, b)?;
            let rhs = fractional_laplacian(&f, a + b)?;
            semi.see(lhs.rel_diff(&rhs), json!({"N": n, "seed": seed, "a": a, "b": b}));

            let u = biot_savart(&f);
            let c = u.curl()?;
            let mut zero_mean = f.clone();
            zero_mean.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            curl.see(c.rel_diff(&zero_mean), inputs.clone());
            div.see(u.divergence_residual(), inputs.clone());

            let beta = 0.2 + 0.7 * ((t * 29) % 10) as f64 / 9.0;
            let theta = seeded_field(&grid, seed ^ 0x5555);
            let g = f.sub(&riesz_beta(&theta, beta)?)?;
            let (ug, ut) = velocity_split(&g, &theta, beta)?;
            let sum = ug.add(&ut)?;
            let e = sum.u1.rel_diff(&u.u1).max(sum.u2.rel_diff(&u.u2));
            recomb.see(e, json!({"N": n, "seed": seed, "beta": beta}));
        }
        props.extend([round.done(), semi.done(), curl.done(), div.done(), recomb.done()]);
    }
    let grid = Grid::new(16)?;
    let mut prod = Worst::new("dealiased_product_vs_convolution_N16", 1e-12);
    for t in 0..trials.min(5) {
        let seed = opts.seed.wrapping_add(t as u64);
        let f = seeded_field(&grid, seed);
        let g = seeded_field(&grid, seed ^ 0xabcd);
        let fast = dealiased_product(&f, &g)?;
        let slow = brute_force_product(&f, &g);
        prod.see(fast.rel_diff(&slow), json!({"N": 16, "seed": seed}));
    }
    props.push(prod.done());
    Ok((props, Vec::new()))
}

fn bernstein(opts: &VerifyOptions) -> Result<(Vec<Property>, Vec<Census>)> {
    let mut props = Vec::new();
    let mut censuses = Vec::new();
    for n in [16usize, 64, 128] {
        let bank = DyadicBank::new(&Grid::new(n)?)?;
        props.push(property(
            format!("partition_of_unity_N{n}"),
            bank.partition_residual(),
            1e-12,
            json!({"N": n}),
        ));
    }
    let bank64 = DyadicBank::new(&Grid::new(64)?)?;
    let mut recon = Worst::new("block_reconstruction_N64", 1e-13);
    for t in 0..5u64 {
        let seed = opts.seed.wrapping_add(t);
        let f = seeded_field(bank64.grid(), seed);
        let mut acc = SpectralField::zeros(bank64.grid());
        for j in bank64.blocks() {
            acc = acc.add(&bank64.block(&f, j)?)?;
        }
        recon.see(acc.rel_diff(&f), json!({"N": 64, "seed": seed}));
    }
    props.push(recon.done());

    let bank128 = DyadicBank::new(&Grid::new(128)?)?;
    let cases = [
        BernsteinCase { k: 1, a: 2.0, b: 2.0 },
        BernsteinCase {
            k: 0,
            a: 2.0,
            b: f64::INFINITY,
        },
        BernsteinCase { k: 1, a: 2.0, b: 4.0 },
    ];
    let trials = opts.trials.unwrap_or(8);
    let report = bernstein_check(&bank128, trials, 1..=4, &cases, AnnulusFamily::Packet, opts.seed)?;
    for c in cases {
        props.push(property(
            format!("bernstein_j_spread_k{}_a{}_b{}", c.k, c.a, c.b),
            report.j_spread(c),
            0.1,
            json!({"N": 128, "trials": trials, "seed": opts.seed, "j": [1, 4], "family": "packet"}),
        ));
    }

    let trials = opts.trials.unwrap_or(40);
    for s in [0.5, 1.0] {
        let coarse = besov_sobolev_census(&bank64, trials, s, opts.seed)?;
        let fine = besov_sobolev_census(&bank128, trials, s, opts.seed)?;
        let drift = coarse.max_drift(&fine).max(coarse.min_drift(&fine));
        props.push(property(
            format!("besov_sobolev_refinement_drift_s{s}"),
            drift,
            0.05,
            json!({"s": s, "seed": opts.seed, "trials": trials}),
        ));
        let bounded = fine.is_finite() && fine.min_ratio > 0.0;
        props.push(property(
            format!("besov_sobolev_bounds_s{s}"),
            if bounded {
                fine.max_ratio / fine.min_ratio
            } else {
                f64::INFINITY
            },
            10.0,
            json!({"s": s, "seed": opts.seed, "trials": trials}),
        ));
        censuses.extend([coarse, fine]);
    }
    Ok((props, censuses))
}

fn gn(opts: &VerifyOptions) -> Result<(Vec<Property>, Vec<Census>)> {
    let trials = opts.trials.unwrap_or(30);
    let (beta, s, gamma) = (0.8, 0.55, 0.25);
    let mut props = Vec::new();
    let mut censuses = Vec::new();
    let coarse = gn_census(&DyadicBank::new(&Grid::new(64)?)?, trials, beta, s, gamma, opts.seed)?;
    let fine = gn_census(&DyadicBank::new(&Grid::new(128)?)?, trials, beta, s, gamma, opts.seed)?;
    for (c, f) in [(&coarse.0, &fine.0), (&coarse.1, &fine.1)] {
        let inputs = json!({"beta": beta, "s": s, "gamma": gamma, "seed": opts.seed, "trials": trials});
        props.push(property(
            format!("{}_finite", f.check_name),
            if f.is_finite() && c.is_finite() { 0.0 } else { 1.0 },
            0.0,
            inputs.clone(),
        ));
        props.push(property(
            format!("{}_refinement_drift", f.check_name),
            c.max_drift(f),
            0.2,
            inputs,
        ));
    }
    censuses.extend([coarse.0, coarse.1, fine.0, fine.1]);
    Ok((props, censuses))
}

fn betas(opts: &VerifyOptions) -> Vec<f64> {
    opts.beta.map(|b| vec![b]).unwrap_or_else(|| vec![0.3, 0.5, 0.8])
}

/// Velocity and temperature of commutator trial `t`, identical on every grid with `N >= 32`.
fn commutator_inputs(grid: &std::sync::Arc<Grid>, seed: u64, t: usize) -> (SpectralField, SpectralField) {
    let (amp, slope) = family_params(t);
    let omega = random_field(grid, seed.wrapping_add(t as u64), FAMILY_KMAX, |k| k.powf(-slope));
    let theta = random_field(grid, seed.wrapping_add(t as u64) ^ 0x7777, FAMILY_KMAX, |k| {
        amp * k.powf(-slope)
    });
    (omega, theta)
}

fn commutator(opts: &VerifyOptions) -> Result<(Vec<Property>, Vec<Census>)> {
    let trials = opts.trials.unwrap_or(50);
    let mut props = Vec::new();
    let mut censuses = Vec::new();
    for beta in betas(opts) {
        let mut routes = Worst::new(format!("commutator_routes_beta{beta}"), 1e-12);
        let mut per_n = Vec::new();
        for n in [64usize, 128] {
            let bank = DyadicBank::new(&Grid::new(n)?)?;
            let mut census = Census::new(
                "commutator_estimate",
                n,
                json!({"beta": beta, "p": 2.0, "p1": 4.0, "p2": 4.0, "seed": opts.seed}),
            );
            for t in 0..trials {
                let (omega, theta) = commutator_inputs(bank.grid(), opts.seed, t);
                let u = biot_savart(&omega);
                if n == 64 {
                    let a = commutator_rbeta(&u, &theta, beta)?;
                    let b = commutator_rbeta_flux(&u, &theta, beta)?;
                    routes.see(
                        a.rel_diff(&b),
                        json!({"N": n, "beta": beta, "seed": opts.seed, "trial": t}),
                    );
                }
                census.push(commutator_estimate_check(&u, &theta, beta, (2.0, 4.0, 4.0), &bank)?);
            }
            per_n.push(census);
        }
        props.push(routes.done());
        let inputs = json!({"beta": beta, "seed": opts.seed, "trials": trials});
        props.push(property(
            format!("commutator_estimate_finite_beta{beta}"),
            if per_n.iter().all(Census::is_finite) { 0.0 } else { 1.0 },
            0.0,
            inputs.clone(),
        ));
        props.push(property(
            format!("commutator_estimate_refinement_drift_beta{beta}"),
            per_n[0].max_drift(&per_n[1]),
            0.2,
            inputs,
        ));
        censuses.extend(per_n);
    }
    Ok((props, censuses))
}

/// Defect and max-point ratio censuses for one exponent at one resolution.
pub fn pointwise_census(n: usize, beta: f64, trials: usize, seed: u64) -> Result<(Census, Census)> {
    let bank = DyadicBank::new(&Grid::new(n)?)?;
    let params = json!({"beta": beta, "seed": seed});
    let mut defect = Census::new("pointwise_min_defect_over_scale", n, params.clone());
    let mut ratio = Census::new("pointwise_maxpoint_ratio", n, params);
    for t in 0..trials {
        let (amp, slope) = family_params(t);
        let f = multiscale_field(&bank, seed.wrapping_add(t as u64), amp, slope);
        let r = pointwise_bound_check(&f, beta)?;
        defect.push(if r.scale > 0.0 { r.min_defect / r.scale } else { 0.0 });
        if let Some(q) = r.maxpoint_ratio {
            ratio.push(q);
        }
    }
    Ok((defect, ratio))
}

fn pointwise(opts: &VerifyOptions) -> Result<(Vec<Property>, Vec<Census>)> {
    let trials = opts.trials.unwrap_or(100);
    let mut props = Vec::new();
    let mut censuses = Vec::new();
    for beta in betas(opts) {
        let (d64, r64) = pointwise_census(64, beta, trials, opts.seed)?;
        let (d128, r128) = pointwise_census(128, beta, trials, opts.seed)?;
        let inputs = json!({"beta": beta, "seed": opts.seed, "trials": trials});
        props.push(property(
            format!("pointwise_defect_nonnegative_beta{beta}"),
            -d64.min_ratio.min(d128.min_ratio),
            1e-10,
            inputs.clone(),
        ));
        props.push(property(
            format!("pointwise_floor_positive_beta{beta}"),
            if r64.min_ratio > 0.0 { 0.0 } else { 1.0 },
            0.0,
            inputs.clone(),
        ));
        props.push(property(
            format!("pointwise_floor_refinement_drift_beta{beta}"),
            r64.min_drift(&r128),
            0.2,
            inputs,
        ));
        censuses.extend([d64, r64, d128, r128]);
    }
    Ok((props, censuses))
}

fn energy(opts: &VerifyOptions) -> Result<(Vec<Property>, Vec<Census>)> {
    let trials = opts.trials.unwrap_or(3);
    let mut worst = Worst::new("energy_laws_N64", 1e-4);
    let mut census = Census::new("energy_law_residual", 64, json!({"alpha": 0.8, "beta": 0.7, "T": 0.5}));
    for t in 0..trials {
        let seed = opts.seed.wrapping_add(t as u64);
        let mut cfg = SolverConfig::new(0.8, 0.7, 64, 2.5e-3, 0.5);
        cfg.seed = seed;
        let grid = Grid::new(64)?;
        let init = FlowState::new(
            smooth_random(&grid, seed, 1.0),
            smooth_random(&grid, seed ^ 0x9e37_79b9_7f4a_7c15, 1.0),
            0.0,
        )?;
        let mut diag = DiagnosticsMonitor::new(&cfg, Default::default())?;
        let traj = run(
            &cfg,
            &init,
            &mut [&mut diag],
            &RunOptions {
                cadence: 20.0,
                keep_states: false,
            },
        )?;
        let r = diag
            .into_records()
            .iter()
            .map(|r| r.worst_energy_residual())
            .fold(0.0, f64::max);
        let r = if traj.is_resolved() { r } else { f64::INFINITY };
        census.push(r);
        worst.see(
            r,
            json!({"N": 64, "seed": seed, "alpha": 0.8, "beta": 0.7, "dt": 2.5e-3, "T": 0.5}),
        );
    }
    Ok((vec![worst.done()], vec![census]))
}

/// Runs one suite, or every suite for `"all"`.
pub fn run_suites(name: &str, opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => {
            return Err(HarnessError::Invalid(format!(
                "unknown suite `{other}`; expected one of {} or all",
                SUITES.join(", ")
            )))
        }
    };
    if let Some(b) = opts.beta {
        if !(b > 0.0 && b < 1.0) {
            return Err(HarnessError::Invalid(format!("beta: {b} lies outside (0, 1)")));
        }
    }
    names
        .into_iter()
        .map(|s| {
            let start = Instant::now();
            let (properties, censuses) = match s {
                "operators" => operators(opts),
                "bernstein" => bernstein(opts),
                "gn" => gn(opts),
                "commutator" => commutator(opts),
                "pointwise" => pointwise(opts),
                _ => energy(opts),
            }?;
            Ok(SuiteReport {
                suite: s.into(),
                passed: properties.iter().all(|p| p.passed),
                elapsed_s: start.elapsed().as_secs_f64(),
                properties,
                censuses,
            })
        })
        .collect()
}
