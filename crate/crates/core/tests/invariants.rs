use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use scp_core::dynamics::{concentration_function, is_non_increasing, symmetrized_sequence, Params};
use scp_core::groups::{
    shift_apply, FiniteGroup, Group, IntAutomorphism, LatticeGroup, Profile, RationalPoint, TorusSubgroup,
};
use scp_core::harmonic::{harmonic_space, is_harmonic};
use scp_core::measures::{nearest_finite_haar, AtomicMeasure, SpectralMeasure};
use scp_core::scp_engine::{classify_built, BuiltGroup, ScpMeasure, ScpVerdict};
use scp_core::spectral_linalg::{isolate_roots, kronecker_all_roots_unit_modulus, IntPolynomial};

fn groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(6),
        FiniteGroup::symmetric(3),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
        FiniteGroup::alternating(4),
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
    ]
}

fn group_and_measure() -> impl Strategy<Value = (FiniteGroup, AtomicMeasure<usize>)> {
    (0..groups().len(), prop::collection::vec((0usize..24, 1u64..6), 1..5)).prop_map(|(gi, atoms)| {
        let g = groups().swap_remove(gi);
        let n = g.order();
        let mu = AtomicMeasure::from_counts(atoms.into_iter().map(|(x, c)| (x % n, c))).unwrap();
        (g, mu)
    })
}

fn total(mu: &AtomicMeasure<usize>) -> BigRational {
    mu.atoms().map(|(_, w)| w).fold(BigRational::zero(), |a, b| a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn convolution_is_associative_and_preserves_mass((g, mu) in group_and_measure(), k in 0usize..24) {
        let nu = AtomicMeasure::uniform([0, k % g.order()]).unwrap();
        let left = mu.convolve(&g, &nu).convolve(&g, &mu);
        let right = mu.convolve(&g, &nu.convolve(&g, &mu));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(total(&left), BigRational::one());
    }

    #[test]
    fn total_variation_is_a_metric((g, mu) in group_and_measure(), (_, nu) in group_and_measure()) {
        let nu = nu.map(|&x| x % g.order());
        let rho = mu.convolve(&g, &nu);
        let d = |a: &AtomicMeasure<usize>, b: &AtomicMeasure<usize>| a.tv_distance(b);
        prop_assert_eq!(d(&mu, &nu), d(&nu, &mu));
        prop_assert!(d(&mu, &nu) <= BigRational::one());
        prop_assert!(d(&mu, &rho) <= d(&mu, &nu) + d(&nu, &rho));
        prop_assert!(d(&mu, &mu).is_zero());
    }

    #[test]
    fn symmetrized_limit_is_normalized_haar((g, mu) in group_and_measure()) {
        let params = Params { eps: 1e-13, ..Params::default() };
        let t = symmetrized_sequence(&g, &mu, &params).unwrap();
        let rho = t.last().unwrap();
        let (h, d) = nearest_finite_haar(&g, rho).unwrap();
        prop_assert!(d < BigRational::new(1.into(), 10_000_000_000i64.into()));
        for &x in mu.support() {
            prop_assert_eq!(g.conjugate_set(x, &h), h.clone());
        }
    }

    #[test]
    fn shifted_haar_verdicts_are_normalized((g, mu) in group_and_measure()) {
        let c = classify_built(&BuiltGroup::Finite(g), &ScpMeasure::Finite(mu), &Params::default()).unwrap();
        match c.verdict {
            ScpVerdict::ShiftedHaar { normalization_ok, .. } => prop_assert!(normalization_ok),
            v => prop_assert!(false, "finite group gave {}", v.tag()),
        }
    }

    #[test]
    fn harmonic_basis_solves_the_equation((g, mu) in group_and_measure()) {
        let h = harmonic_space(&g, &mu).unwrap();
        prop_assert!(h.dim() >= h.cosets.len());
        for f in &h.basis {
            prop_assert!(is_harmonic(&g, &mu, f).unwrap());
        }
        prop_assert!(h.is_choquet_deny());
    }

    #[test]
    fn concentration_never_increases(steps in prop::collection::vec((-3i64..4, 1u64..4), 1..4), r in 0i64..3) {
        let z = LatticeGroup { dim: 1 };
        let mu = AtomicMeasure::from_counts(steps.into_iter().map(|(x, c)| (vec![x], c))).unwrap();
        let k: BTreeSet<Vec<i64>> = (-r..=r).map(|x| vec![x]).collect();
        let c = concentration_function(&z, &mu, &k, 10).unwrap();
        prop_assert!(is_non_increasing(&c));
    }

    #[test]
    fn kronecker_agrees_with_root_isolation(c in prop::collection::vec(-4i64..5, 1..6)) {
        let mut coeffs = c;
        if coeffs[0] == 0 {
            coeffs[0] = 1;
        }
        coeffs.push(1);
        let f = IntPolynomial::from_i64(&coeffs);
        let kronecker = kronecker_all_roots_unit_modulus(&f).unwrap();
        let roots = isolate_roots(&f.to_rational()).unwrap();
        prop_assert_eq!(kronecker, roots.iter().all(|r| r.modulus.contains(1.0)));
    }

    #[test]
    fn automorphism_images_round_trip(a in 0usize..3, p in prop::collection::vec((0i64..6, 1i64..7), 2)) {
        let rows = [vec![vec![1, 1], vec![0, 1]], vec![vec![2, 1], vec![1, 1]], vec![vec![0, -1], vec![1, 0]]];
        let alpha = IntAutomorphism::from_i64_rows(&rows[a]).unwrap();
        let x = RationalPoint::from_fractions(&p).unwrap();
        let k = TorusSubgroup::generated_by(2, std::slice::from_ref(&x)).unwrap();
        prop_assert_eq!(k.image(&alpha).unwrap().image(&alpha.inverse()).unwrap(), k.clone());
        prop_assert!(k.image(&alpha).unwrap().contains_rational(&alpha.apply_rational(&x)));
    }

    #[test]
    fn profile_shifts_compose(start in -5i64..5, explicit in prop::collection::vec(0u8..3, 0..6), k in -7i64..7, j in -7i64..7) {
        let p = Profile::new(start, explicit, 0u8, 1u8);
        prop_assert_eq!(shift_apply(&shift_apply(&p, k), j), shift_apply(&p, k + j));
        let q = shift_apply(&p, k);
        prop_assert_eq!(q.get(0), p.get(k));
    }

    #[test]
    fn spectral_coefficients_multiply(a in prop::collection::vec((0i64..8, 0i64..8), 1..4), chi in prop::collection::vec(-5i64..6, 2)) {
        let torus = scp_core::groups::RationalTorus { dim: 2 };
        let pts: Vec<RationalPoint> = a.iter().map(|&(x, y)| RationalPoint::from_fractions(&[(x, 8), (y, 5)]).unwrap()).collect();
        let mu = AtomicMeasure::uniform(pts.clone()).unwrap();
        let nu = AtomicMeasure::dirac(pts[0].clone());
        let exact = SpectralMeasure::from_rational_atoms(2, &mu.convolve(&torus, &nu)).unwrap();
        let product = SpectralMeasure::from_rational_atoms(2, &mu).unwrap()
            .convolve(&SpectralMeasure::from_rational_atoms(2, &nu).unwrap()).unwrap();
        prop_assert!((exact.coeff(&chi) - product.coeff(&chi)).norm() < 1e-12);
    }
}

#[test]
fn group_axioms_hold_for_the_sample_groups() {
    for g in groups() {
        for a in g.elements() {
            assert_eq!(g.op(&a, &g.inverse(&a)), g.identity());
        }
    }
}
