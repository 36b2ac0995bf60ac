use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bsq_core::diagnostics::regime_classify;
use bsq_harness::besov::besov_of_snapshot;
use bsq_harness::output::write_json;
use bsq_harness::simulate::simulate;
use bsq_harness::spec::{ExperimentSpec, SweepSpec};
use bsq_harness::sweep::{run_sweep, write_atlas};
use bsq_harness::verify::{run_suites, VerifyOptions};
use bsq_harness::{configure_threads, HarnessError, Result};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bsq", version, about = "Fractional Boussinesq simulations and diagnostics")]
struct Cli {
    /// Thread cap for FFT data parallelism.
    #[arg(long, env = "BSQ_NUM_THREADS", global = true, hide_env_values = true)]
    threads: Option<String>,
    #[command(subcommand)]
    command: Command,
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" | "Inf" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|e| format!("{e}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides outputs.dir).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed of the initial data (overrides init.seed).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run an (alpha, beta) sweep and write atlas.csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
        /// Worker threads (defaults to the sweep's parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a property suite: operators, bernstein, gn, commutator, pointwise, energy or all.
    Verify {
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        beta: Option<f64>,
        /// Directory for verify.json and census files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Besov norm of a snapshot field with its block breakdown.
    Besov {
        snapshot: PathBuf,
        #[arg(long, default_value = "theta")]
        field: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, default_value = "2", value_parser = parse_exponent)]
        p: f64,
        #[arg(long, default_value = "2", value_parser = parse_exponent)]
        r: f64,
    },
    /// Regime, beta* and coverage of (alpha, beta).
    Classify { alpha: f64, beta: f64 },
}

fn write_error_log(dir: Option<&Path>, err: &HarnessError) {
    if let Some(dir) = dir {
        if fs::create_dir_all(dir).is_ok() {
            let _ = fs::write(dir.join("error.log"), format!("{err}\n"));
        }
    }
}

fn cmd_simulate(config: &Path, out: Option<PathBuf>, seed: Option<u64>) -> Result<()> {
    let result = (|| {
        let mut spec = ExperimentSpec::load(config)?;
        if let Some(dir) = &out {
            spec.outputs.dir = dir.clone();
        }
        if let Some(s) = seed {
            spec.init.seed = Some(s);
        }
        spec.validate()?;
        let outcome = simulate(&spec)?;
        let m = &outcome.manifest;
        println!(
            "{}: {} steps, {} records, status {} -> {}",
            if m.label.is_empty() { "run" } else { &m.label },
            m.steps,
            m.n_records,
            m.status,
            spec.outputs.dir.display()
        );
        Ok(())
    })();
    if let Err(e) = &result {
        write_error_log(out.as_deref(), e);
    }
    result
}

fn cmd_sweep(config: &Path, out: &Path, workers: Option<usize>, seed: Option<u64>) -> Result<()> {
    let mut sweep = SweepSpec::load(config)?;
    if let Some(s) = seed {
        sweep.base.init.seed = Some(s);
    }
    let workers = workers.unwrap_or(sweep.parallelism);
    if workers == 0 {
        return Err(HarnessError::Invalid("workers: must be at least 1".into()));
    }
    fs::create_dir_all(out)?;
    let rows = run_sweep(&sweep, workers, Some(&out.join("cells")))?;
    write_atlas(&out.join("atlas.csv"), &rows)?;
    for r in &rows {
        println!(
            "alpha={} beta={} {} {} {}",
            r.alpha,
            r.beta,
            r.regime,
            if r.covered { "COVERED" } else { "NOT_COVERED" },
            r.verdict
        );
    }
    Ok(())
}

fn cmd_verify(suite: &str, opts: VerifyOptions, out: Option<PathBuf>) -> Result<()> {
    let reports = run_suites(suite, &opts)?;
    for r in &reports {
        print!("{}", r.summary());
    }
    let passed = reports.iter().all(|r| r.passed);
    let verdict = serde_json::json!({"suite": suite, "passed": passed, "seed": opts.seed, "reports": reports});
    println!(
        "{}",
        serde_json::to_string(&serde_json::json!({"suite": suite, "passed": passed}))?
    );
    if let Some(dir) = out {
        fs::create_dir_all(&dir)?;
        write_json(&dir.join("verify.json"), &verdict)?;
        for r in &reports {
            for c in &r.censuses {
                write_json(&dir.join(format!("census_{}_N{}.json", c.check_name, c.n)), c)?;
            }
        }
    }
    if passed {
        Ok(())
    } else {
        let failing: Vec<String> = reports
            .iter()
            .flat_map(|r| r.failures().map(|p| format!("{} {}", p.name, p.inputs)))
            .collect();
        Err(HarnessError::Failed(failing.join("; ")))
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    configure_threads(cli.threads.as_deref())?;
    match cli.command {
        Command::Simulate { config, out, seed } => cmd_simulate(&config, out, seed),
        Command::Sweep {
            config,
            out,
            workers,
            seed,
        } => cmd_sweep(&config, &out, workers, seed),
        Command::Verify {
            suite,
            trials,
            seed,
            beta,
            out,
        } => cmd_verify(&suite, VerifyOptions { trials, seed, beta }, out),
        Command::Besov {
            snapshot,
            field,
            s,
            p,
            r,
        } => {
            let report = besov_of_snapshot(&snapshot, &field, s, p, r)?;
            print!("{}", report.render());
            Ok(())
        }
        Command::Classify { alpha, beta } => {
            let regime = regime_classify(alpha, beta).map_err(|e| HarnessError::Invalid(e.to_string()))?;
            println!("{regime}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bsq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
