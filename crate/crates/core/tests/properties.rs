use bsq_core::diagnostics::{beta_star, commutator_rbeta, commutator_rbeta_flux, regime_classify, Criticality};
use bsq_core::harmonic::{besov_norm, BesovIndex, DyadicBank};
use bsq_core::spectral::{
    biot_savart, dealiased_product, fractional_laplacian, random_field, riesz_beta, velocity_split, Grid, SpectralField,
};
use proptest::prelude::*;

fn field(n: usize, seed: u64, slope: f64) -> SpectralField {
    let g = Grid::new(n).unwrap();
    random_field(&g, seed, (n as i64 - 1) / 3, |k| k.powf(-slope))
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn physical_round_trip(seed in any::<u64>(), n in prop::sample::select(vec![8usize, 16, 32])) {
        let f = field(n, seed, 1.0);
        let back = SpectralField::from_physical(f.grid(), &f.to_physical()).unwrap();
        prop_assert!(back.rel_diff(&f) < 1e-13);
    }

    #[test]
    fn lambda_semigroup(seed in any::<u64>(), a in -1.0f64..2.0, b in -1.0f64..2.0) {
        let f = field(16, seed, 1.5);
        let lhs = fractional_laplacian(&fractional_laplacian(&f, a).unwrap(), b).unwrap();
        let rhs = fractional_laplacian(&f, a + b).unwrap();
        prop_assert!(lhs.rel_diff(&rhs) < 1e-12);
    }

    #[test]
    fn g_recombination_is_linear(seed in any::<u64>(), beta in 0.05f64..0.95, s in -3.0f64..3.0) {
        let omega = field(16, seed, 1.0);
        let theta = field(16, seed ^ 1, 1.0);
        let g = omega.sub(&riesz_beta(&theta, beta).unwrap()).unwrap();
        let (ug, ut) = velocity_split(&g.scale(s), &theta.scale(s), beta).unwrap();
        let u = biot_savart(&omega.scale(s));
        let sum = ug.add(&ut).unwrap();
        prop_assert!(sum.u1.rel_diff(&u.u1) < 1e-12 && sum.u2.rel_diff(&u.u2) < 1e-12);
        prop_assert!(u.divergence_residual() < 1e-14);
    }

    #[test]
    fn besov_triangle_and_monotonicity(
        seed in any::<u64>(),
        s in -1.0f64..2.0,
        p in prop::sample::select(vec![1.0, 2.0, 4.0, f64::INFINITY]),
        r in prop::sample::select(vec![1.0, 2.0, f64::INFINITY]),
    ) {
        let bank = DyadicBank::new(&Grid::new(32).unwrap()).unwrap();
        let f = field(32, seed, 1.0);
        let g = field(32, seed ^ 2, 0.5);
        let idx = BesovIndex::new(s, p, r).unwrap();
        let nf = besov_norm(&f, idx, &bank).unwrap();
        let ng = besov_norm(&g, idx, &bank).unwrap();
        let nsum = besov_norm(&f.add(&g).unwrap(), idx, &bank).unwrap();
        prop_assert!(nsum <= (nf + ng) * (1.0 + 1e-12));
        let higher = besov_norm(&f, BesovIndex::new(s + 0.5, p, r).unwrap(), &bank).unwrap();
        // 2^{-j/2} <= 2^{1/2} on every block j >= -1
        prop_assert!(nf <= std::f64::consts::SQRT_2 * higher * (1.0 + 1e-12));
        if r > 1.0 {
            let coarser = besov_norm(&f, BesovIndex::new(s, p, 1.0).unwrap(), &bank).unwrap();
            prop_assert!(nf <= coarser * (1.0 + 1e-12));
        }
    }

    #[test]
    fn product_is_symmetric_and_bilinear(seed in any::<u64>(), c in -2.0f64..2.0) {
        let f = field(16, seed, 1.0);
        let g = field(16, seed ^ 3, 1.0);
        let h = field(16, seed ^ 4, 1.0);
        let fg = dealiased_product(&f, &g).unwrap();
        prop_assert!(fg.rel_diff(&dealiased_product(&g, &f).unwrap()) < 1e-13);
        let lhs = dealiased_product(&f, &g.axpy(c, &h).unwrap()).unwrap();
        let rhs = fg.axpy(c, &dealiased_product(&f, &h).unwrap()).unwrap();
        prop_assert!(lhs.rel_diff(&rhs) < 1e-12);
    }

    #[test]
    fn commutator_routes_agree(seed in any::<u64>(), beta in 0.05f64..0.95) {
        let u = biot_savart(&field(32, seed, 1.5));
        let theta = field(32, seed ^ 5, 1.0);
        let a = commutator_rbeta(&u, &theta, beta).unwrap();
        let b = commutator_rbeta_flux(&u, &theta, beta).unwrap();
        prop_assert!(a.rel_diff(&b) < 1e-12);
    }

    #[test]
    fn coverage_matches_threshold(alpha in 0.001f64..0.999, beta in 0.001f64..0.999) {
        let r = regime_classify(alpha, beta).unwrap();
        let bs = beta_star(alpha).unwrap();
        prop_assert_eq!(r.covered, beta > bs);
        prop_assert!((0.5..=1.0).contains(&bs));
        let expected = if alpha + beta > 1.0 {
            Criticality::Subcritical
        } else if alpha + beta < 1.0 {
            Criticality::Supercritical
        } else {
            Criticality::Critical
        };
        prop_assert_eq!(r.criticality, expected);
    }
}
