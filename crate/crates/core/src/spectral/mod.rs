//! Periodic-grid spectral representation: grids, fields, Fourier multipliers
//! and dealiased products on the torus [0, 2pi)^2.

mod field;
mod grid;
mod ops;
mod random;

pub use field::SpectralField;
pub use grid::Grid;
pub use ops::{
    advect, biot_savart, dealiased_dot, dealiased_product, exact_product, fractional_laplacian,
    fractional_laplacian_strict, gradient, homogeneous_l2, inverse_laplacian, l2_norm, lp_norm, lp_of_samples, partial,
    physical_max_abs, riesz_beta, sup_norm, velocity_split, PointEvaluator, VelocityField,
};
pub use random::random_field;
