use proptest::prelude::*;

use polygap::bounds::{diameter_report, facet_diameter, vertex_diameter};
use polygap::chain::{build_chain, structure_ok, total_variation, Propagator};
use polygap::corpus::random_simple;
use polygap::geometry::generators::{random_integral, random_sphere};
use polygap::geometry::{facets_of_vpolytope, FacetPath};
use polygap::smoothed::{af_logconcavity_check, sample_instance, SteinerCoefficients};
use polygap::spectral::{certify_gap, SpectralBundle};
use polygap::tolerances::Tolerances;

fn sphere_complex(m: usize, d: usize, seed: u64) -> polygap::geometry::FacetComplex {
    facets_of_vpolytope(&random_sphere(m, d, seed), FacetPath::General).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hessian_laplacian_identity(seed in any::<u64>(), m in 6usize..16, d in 2usize..5) {
        let b = SpectralBundle::build(&sphere_complex(m.max(d + 2), d, seed)).unwrap();
        let scale = b.d.iter().cloned().fold(1.0, f64::max);
        prop_assert!(b.identity_defect() <= 1e-10 * scale);
        let h1 = b.h.mul_vec(&vec![1.0; b.n]);
        for (x, y) in h1.iter().zip(&b.d) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn one_positive_eigenvalue(seed in any::<u64>(), m in 5usize..18, d in 3usize..5) {
        let cert = certify_gap(&sphere_complex(m.max(d + 1), d, seed), &Tolerances::default()).unwrap();
        prop_assert!(cert.passed, "{:?}", cert);
    }

    #[test]
    fn gap_certificate_is_scale_invariant(seed in any::<u64>(), t in 0.1f64..10.0) {
        let fc = sphere_complex(10, 3, seed);
        let a = certify_gap(&fc, &Tolerances::default()).unwrap();
        let b = certify_gap(&fc.scaled(t), &Tolerances::default()).unwrap();
        for (x, y) in a.spectrum.iter().zip(&b.spectrum) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn chain_structure_holds(seed in any::<u64>(), m in 5usize..20) {
        let model = build_chain(&sphere_complex(m, 3, seed)).unwrap();
        prop_assert!(structure_ok(&model));
        prop_assert!((model.pi_bar.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for i in 0..model.n {
            for j in 0..model.n {
                if i != j {
                    prop_assert!(model.q[(i, j)] >= 0.0);
                }
            }
        }
    }

    #[test]
    fn semigroup_preserves_probability(seed in any::<u64>(), t in 0.0f64..5.0, start in 0usize..8) {
        let model = build_chain(&sphere_complex(8, 3, seed)).unwrap();
        let mut p = vec![0.0; model.n];
        p[start % model.n] = 1.0;
        let q = model.distribution_at(&p, t);
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let r = Propagator::new(&model).unwrap().distribution_at(&p, t);
        prop_assert!(total_variation(&q, &r) < 1e-8);
        // Stationarity: π̄ P(t) = π̄.
        let s = model.distribution_at(&model.pi_bar, t);
        prop_assert!(total_variation(&s, &model.pi_bar) < 1e-9);
    }

    #[test]
    fn polar_duality_of_diameters(seed in any::<u64>(), m in 7usize..12) {
        let p = random_simple(m, 3, seed);
        let polar = p.polar().unwrap();
        let fd = facet_diameter(&facets_of_vpolytope(&polar, FacetPath::General).unwrap()).unwrap();
        prop_assert_eq!(vertex_diameter(&p).unwrap(), fd);
    }

    #[test]
    fn bounds_dominate_exact_diameter(seed in any::<u64>(), m in 4usize..9, d in 2usize..4) {
        let p = random_integral(m.max(d + 1), d, seed);
        let r = diameter_report(&p, 1.0).unwrap();
        prop_assert!(r.violations.is_empty(), "{:?}", r.violations);
        prop_assert!(r.chebyshev_certified >= r.exact_diameter);
        prop_assert!(r.angle_bound >= r.exact_diameter as f64);
    }

    #[test]
    fn quermassintegrals_are_log_concave(seed in any::<u64>(), m in 5usize..25) {
        let w = SteinerCoefficients::of(&sphere_complex(m, 3, seed)).quermass().unwrap();
        prop_assert!(af_logconcavity_check(&w).passed, "{:?}", w);
    }

    #[test]
    fn perturbation_is_seeded(seed in any::<u64>(), sigma in 0.0f64..1.0) {
        let base = random_sphere(8, 3, 1).points().to_vec();
        let a = sample_instance(base.clone(), sigma, seed).unwrap();
        let b = sample_instance(base, sigma, seed).unwrap();
        prop_assert_eq!(a.points, b.points);
    }
}
