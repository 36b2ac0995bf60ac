//! Littlewood-Paley decomposition on the torus, Besov and Sobolev norms, and
//! numerical censuses for the functional inequalities built on them.

mod bank;
mod checks;
mod norms;

pub use bank::{chi, phi, DyadicBank};
pub use checks::{
    bernstein_check, besov_sobolev_census, derivative_magnitude, family_params, gn_census, gn_interpolation_check,
    multiscale_field, random_annulus_field, AnnulusFamily, BernsteinCase, BernsteinReport, BernsteinRow, GnRatios,
    FAMILY_KMAX,
};
pub use norms::{besov_breakdown, besov_norm, combine_terms, homogeneous_sobolev_norm, sobolev_norm, BesovIndex};
