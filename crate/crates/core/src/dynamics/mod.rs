//! Iteration engines for convolution powers, shifted and symmetrized
//! sequences, orbit products and concentration functions, with a windowed
//! convergence detector.

mod engines;
mod torus;
mod trajectory;

pub use engines::{
    concentration_function, convolution_powers, is_non_increasing, orbit_product, product_sequence, shifted_sequence,
    shifted_sequence_profile, shifted_sequence_semidirect, symmetrize_profile, symmetrized_sequence,
};
pub use torus::{
    convolution_powers_spectral, orbit_product_spectral, orbit_product_subspace, shifted_sequence_spectral,
    shifted_sequence_subspace, symmetrized_sequence_spectral, window_chars,
};
pub use trajectory::{
    detect_convergence, ConvergenceCall, ConvergenceStatus, Located, Params, Snapshot, Trajectory, WindowSnapshot,
};

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use nalgebra::{DMatrix, DVector};
    use num_rational::BigRational;

    use super::*;
    use crate::groups::{
        FiniteGroup, IntAutomorphism, LatticeGroup, PermAutomorphism, Profile, RationalPoint, RationalTorus,
        TorusPoint, TorusSubgroup,
    };
    use crate::measures::{AtomicMeasure, ProfileMeasure, SpectralMeasure, SubspaceMeasure};

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn params(n_max: usize) -> Params {
        Params { n_max, stop_on_convergence: false, ..Params::default() }
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn powers_of_trivial_and_idempotent_measures() {
        let g = FiniteGroup::cyclic(2);
        let t = convolution_powers(&g, &AtomicMeasure::dirac(0), &params(5)).unwrap();
        assert!(t.distances().iter().all(|&d| d == 0.0));
        let u = AtomicMeasure::uniform([0usize, 1]).unwrap();
        let t = convolution_powers(&g, &u, &params(3)).unwrap();
        assert!(t.states().iter().all(|s| *s == u));
    }

    #[test]
    fn binomial_powers_on_z() {
        let z = LatticeGroup { dim: 1 };
        let mu = AtomicMeasure::uniform([vec![0], vec![1]]).unwrap();
        let t = convolution_powers(&z, &mu, &params(4)).unwrap();
        let m4 = t.at_step(4).unwrap();
        for k in 0..=4 {
            assert_eq!(m4.weight(&vec![k as i64]), q(binomial(4, k) as i64, 16));
        }
    }

    #[test]
    fn drifting_atom_diverges_and_constant_converges() {
        let z = LatticeGroup { dim: 1 };
        let p = Params::default();
        let t = convolution_powers(&z, &AtomicMeasure::dirac(vec![1]), &p).unwrap();
        let call = detect_convergence(&t, p.eps, p.horizon);
        assert!(call.is_diverged(), "{:?}", call.status);
        assert!(t.len() < 20);

        let t = convolution_powers(&z, &AtomicMeasure::dirac(vec![0]), &p).unwrap();
        let call = detect_convergence(&t, p.eps, p.horizon);
        assert!(call.is_converged());
        assert_eq!(call.limit.unwrap(), AtomicMeasure::dirac(vec![0]));
    }

    #[test]
    fn rotation_cycle_is_certified() {
        let g = FiniteGroup::cyclic(4);
        let p = Params::default();
        let t = convolution_powers(&g, &AtomicMeasure::dirac(1), &p).unwrap();
        let call = detect_convergence(&t, p.eps, p.horizon);
        match call.status {
            ConvergenceStatus::Diverged { evidence, .. } => assert!(evidence.contains("cycle")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lazy_walk_on_z_is_undecided() {
        let z = LatticeGroup { dim: 1 };
        let p = Params { n_max: 40, ..Params::default() };
        let mu = AtomicMeasure::uniform([vec![0], vec![1]]).unwrap();
        let t = convolution_powers(&z, &mu, &p).unwrap();
        let call = detect_convergence(&t, p.eps, p.horizon);
        assert!(matches!(call.status, ConvergenceStatus::Undecided { .. }));
    }

    #[test]
    fn symmetrized_point_mass_is_identity() {
        let g = FiniteGroup::symmetric(3);
        let t = symmetrized_sequence(&g, &AtomicMeasure::dirac(4), &params(4)).unwrap();
        assert!(t.states().iter().all(|s| *s == AtomicMeasure::dirac(0)));
    }

    #[test]
    fn symmetrized_limit_is_haar_on_finite_group() {
        let g = FiniteGroup::symmetric(3);
        let mu = AtomicMeasure::from_counts([(1usize, 1), (3, 2)]).unwrap();
        let p = Params { eps: 1e-12, ..Params::default() };
        let t = symmetrized_sequence(&g, &mu, &p).unwrap();
        let call = detect_convergence(&t, p.eps, p.horizon);
        assert!(call.is_converged());
        let (h, d) = crate::measures::nearest_finite_haar(&g, t.last().unwrap()).unwrap();
        assert!(g.is_subgroup(&h));
        assert!(num_traits::ToPrimitive::to_f64(&d).unwrap() < 1e-10);
    }

    #[test]
    fn concentration_examples() {
        let z = LatticeGroup { dim: 1 };
        let mu = AtomicMeasure::uniform([vec![0], vec![1]]).unwrap();
        let origin = BTreeSet::from([vec![0]]);
        let c = concentration_function(&z, &mu, &origin, 4).unwrap();
        assert_eq!(c[3], q(6, 16));
        assert!(is_non_increasing(&c));
        let c = concentration_function(&z, &AtomicMeasure::dirac(vec![1]), &origin, 6).unwrap();
        assert!(c.iter().all(|x| *x == q(1, 1)));
        let g = FiniteGroup::dihedral(4);
        let all: BTreeSet<usize> = g.elements().collect();
        let mu = AtomicMeasure::from_counts([(1usize, 3), (5, 1)]).unwrap();
        let c = concentration_function(&g, &mu, &all, 5).unwrap();
        assert!(c.iter().all(|x| *x == q(1, 1)));
    }

    #[test]
    fn shifted_sequence_of_pure_shift_is_identity() {
        let base = RationalTorus { dim: 2 };
        let alpha = IntAutomorphism::from_i64_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let zero = RationalPoint::zero(2);
        let t = shifted_sequence_semidirect(&base, &alpha, &AtomicMeasure::dirac(zero.clone()), 1, &zero, &params(6))
            .unwrap();
        assert!(t.states().iter().all(|s| *s == AtomicMeasure::dirac(zero.clone())));
        assert!(t.warnings().is_empty());
    }

    #[test]
    fn shifted_haar_of_invariant_subgroup_is_constant() {
        let base = RationalTorus { dim: 2 };
        let alpha = IntAutomorphism::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let k = TorusSubgroup::torsion(2, 2);
        let omega = AtomicMeasure::uniform(k.elements().unwrap()).unwrap();
        let zero = RationalPoint::zero(2);
        let t = shifted_sequence_semidirect(&base, &alpha, &omega, 1, &zero, &params(8)).unwrap();
        assert!(t.states().iter().all(|s| *s == omega));
    }

    #[test]
    fn shifted_sequence_on_finite_group_warns_off_support() {
        let g = FiniteGroup::cyclic(3);
        let mu = AtomicMeasure::dirac(1usize);
        let t = shifted_sequence(&g, &mu, &2, &params(3)).unwrap();
        assert_eq!(t.warnings().len(), 1);
        let t = shifted_sequence(&g, &mu, &1, &params(3)).unwrap();
        assert!(t.states().iter().all(|s| *s == AtomicMeasure::dirac(0)));
    }

    #[test]
    fn finite_orbit_product_converges_to_haar() {
        // the cyclic permutation of the three involutions of ℤ₂²
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let alpha = PermAutomorphism::new(&g, vec![0, 2, 3, 1]).unwrap();
        let lambda = AtomicMeasure::uniform([0usize, 1]).unwrap();
        let t = orbit_product(&g, &lambda, &alpha, &params(6)).unwrap();
        assert_eq!(*t.last().unwrap(), AtomicMeasure::uniform(0..4).unwrap());
    }

    fn lemma_measure() -> (FiniteGroup, ProfileMeasure) {
        let l = FiniteGroup::cyclic(2);
        let m = Profile::step(1, BTreeSet::from([0usize, 1]), BTreeSet::from([0usize]));
        (l, ProfileMeasure::haar(&m).unwrap())
    }

    #[test]
    fn lemma_profile_sequence_is_constant() {
        let (l, omega) = lemma_measure();
        let t = shifted_sequence_profile(&l, &omega, 1, &Profile::constant(0), &params(64)).unwrap();
        assert!(t.states().iter().all(|s| *s == omega));
        assert_eq!(symmetrize_profile(&l, t.last().unwrap()), omega);
    }

    fn contracting_line(t_scale: f64) -> SubspaceMeasure {
        let lam = (3.0 - 5f64.sqrt()) / 2.0;
        let v = DVector::from_vec(vec![1.0, lam - 2.0]).normalize();
        let basis = DMatrix::from_column_slice(2, 1, v.as_slice());
        let map = DMatrix::from_element(1, 1, lam);
        SubspaceMeasure::new(
            basis,
            map,
            vec![(DVector::from_element(1, 0.0), 0.5), (DVector::from_element(1, t_scale), 0.5)],
        )
        .unwrap()
    }

    #[test]
    fn cat_orbit_product_converges_quickly() {
        let p = Params::default();
        let t = orbit_product_subspace(&contracting_line(0.1), &p).unwrap();
        let call = detect_convergence(&t, p.eps, p.horizon);
        assert!(call.is_converged());
        assert!(t.last_step().unwrap() <= 60);
        let limit = call.limit.unwrap();
        assert!(limit.coeffs().iter().any(|c| (0.01..0.99).contains(&c.norm())));
    }

    #[test]
    fn shifted_and_orbit_products_agree() {
        let lambda = contracting_line(0.1);
        let p = params(30);
        let orbit = orbit_product_subspace(&lambda, &p).unwrap();
        let shifted = shifted_sequence_subspace(&lambda, 1, &DVector::from_element(1, 0.0), &p).unwrap();
        for n in 1..30 {
            let (a, b) = (shifted.at_step(n).unwrap(), orbit.at_step(n - 1).unwrap());
            assert!(a.distance(b).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn spectral_orbit_product_of_invariant_haar_is_constant() {
        let alpha = IntAutomorphism::from_i64_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let omega = SpectralMeasure::haar(&TorusSubgroup::torsion(2, 3));
        let t = orbit_product_spectral(&omega, &alpha, &params(10)).unwrap();
        assert!(t.distances().iter().all(|&d| d == 0.0));
        let s = shifted_sequence_spectral(&omega, &alpha, 1, &TorusPoint::zero(2), &params(10)).unwrap();
        assert!(s.distances().iter().all(|&d| d == 0.0));
    }

    #[test]
    fn spectral_powers_match_exact_powers() {
        let mu_atoms =
            AtomicMeasure::uniform([RationalPoint::zero(2), RationalPoint::from_fractions(&[(1, 3), (0, 1)]).unwrap()])
                .unwrap();
        let mu = SpectralMeasure::from_rational_atoms(2, &mu_atoms).unwrap();
        let t = convolution_powers_spectral(&mu, &params(5)).unwrap();
        let exact = mu_atoms.power(&RationalTorus { dim: 2 }, 5);
        let exact = SpectralMeasure::from_rational_atoms(2, &exact).unwrap();
        for (chi, c) in t.last().unwrap().iter() {
            assert!((exact.coeff(chi) - c).norm() < 1e-12);
        }
        let s = symmetrized_sequence_spectral(&mu, &params(3)).unwrap();
        assert!(s.last().unwrap().coeffs().iter().all(|c| c.im == 0.0 && c.re >= 0.0));
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let t = orbit_product_subspace(&contracting_line(0.1), &params(3)).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf, Some("{\"eps\":1e-8}")).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# {\"eps\":1e-8}");
        assert!(lines[1].starts_with("step,distance,coeff_re[1 0],coeff_im[1 0]"));
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("0,,"));
    }

    #[test]
    fn params_validation() {
        assert!(Params::default().validate().is_ok());
        assert!(Params { window: 1, ..Params::default() }.validate().is_err());
        assert!(Params { horizon: 1, ..Params::default() }.validate().is_err());
        assert!(Params { n_max: 2_000_000, ..Params::default() }.validate().is_err());
    }
}
