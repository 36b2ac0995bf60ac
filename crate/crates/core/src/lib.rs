//! Pseudo-spectral simulation of the 2D Boussinesq system with fractional
//! dissipation `nu Lambda^alpha`, `kappa Lambda^beta` on the periodic torus,
//! together with Littlewood-Paley tooling and the a priori quantities used to
//! monitor global regularity.

pub mod census;
pub mod diagnostics;
pub mod error;
pub mod harmonic;
pub mod snapshot;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};

use std::sync::atomic::{AtomicBool, Ordering};

static FFT_PARALLEL: AtomicBool = AtomicBool::new(true);

/// Enables or disables data parallelism inside the 2D FFTs (large grids only).
pub fn set_fft_parallelism(enabled: bool) {
    FFT_PARALLEL.store(enabled, Ordering::Relaxed);
}

pub fn fft_parallelism() -> bool {
    FFT_PARALLEL.load(Ordering::Relaxed)
}
