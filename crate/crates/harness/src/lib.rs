//! Command-line harness: experiment configs, simulations with diagnostics
//! and snapshots, regime sweeps, verification suites and Besov norms.

pub mod besov;
pub mod error;
pub mod output;
pub mod simulate;
pub mod spec;
pub mod sweep;
pub mod verify;

pub use error::{HarnessError, Result};

/// Applies `BSQ_NUM_THREADS`: `1` keeps FFTs serial, larger values size the
/// global thread pool.
pub fn configure_threads(value: Option<&str>) -> Result<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| HarnessError::Invalid(format!("BSQ_NUM_THREADS: expected a positive integer, got `{v}`")))?;
    bsq_core::set_fft_parallelism(n > 1);
    if n > 1 {
        // a second initialisation in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
