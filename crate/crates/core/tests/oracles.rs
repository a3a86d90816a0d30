use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::binomial;
use num_rational::BigRational;
use scp_core::dynamics::{concentration_function, orbit_product_subspace, Params};
use scp_core::groups::{FiniteGroup, IntAutomorphism, LatticeGroup};
use scp_core::measures::AtomicMeasure;
use scp_core::scp_engine::construct_counterexample;
use scp_core::spectral_linalg::IntPolynomial;

/// `∏_k ½(1 + e^{2πi t c λᵏ}) = ∏_k cos(π t c λᵏ) · e^{iπ t c / (1 − λ)}`.
fn cosine_product(tc: f64, lambda: f64) -> Complex64 {
    let mut modulus = 1.0;
    let mut p: f64 = 1.0;
    while p.abs() > 1e-300 {
        modulus *= (PI * tc * p).cos();
        p *= lambda;
    }
    Complex64::from_polar(1.0, PI * tc / (1.0 - lambda)) * modulus
}

#[test]
fn cat_orbit_product_matches_cosine_product() {
    let cat = IntAutomorphism::from_i64_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    let ce = construct_counterexample(&cat, 0.1).unwrap();
    let lambda = (3.0 - 5f64.sqrt()) / 2.0;
    let v = [1.0, lambda - 2.0];
    let norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let t = orbit_product_subspace(&ce.base, &Params { n_max: 200, ..Params::default() }).unwrap();
    let limit = t.last().unwrap();
    for (chi, c) in limit.iter() {
        let proj = (chi[0] as f64 * v[0] + chi[1] as f64 * v[1]) / norm;
        let expect = cosine_product(ce.atom_scale * proj, lambda);
        assert!((c - expect).norm() < 1e-9, "{chi:?}: {c} vs {expect}");
    }
}

#[test]
fn cat_characteristic_polynomial() {
    let cat = IntAutomorphism::from_i64_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    assert_eq!(*cat.char_poly(), IntPolynomial::from_i64(&[1, -3, 1]));
}

#[test]
fn bernoulli_walk_concentration_is_central_binomial() {
    let z = LatticeGroup { dim: 1 };
    let mu = AtomicMeasure::uniform([vec![0], vec![1]]).unwrap();
    let c = concentration_function(&z, &mu, &BTreeSet::from([vec![0]]), 40).unwrap();
    for (i, v) in c.iter().enumerate() {
        let n = i as u64 + 1;
        let expect = BigRational::new(binomial(BigInt::from(n), BigInt::from(n / 2)), BigInt::from(2).pow(n as u32));
        assert_eq!(*v, expect, "n = {n}");
    }
}

#[test]
fn cyclic_powers_match_discrete_fourier_transform() {
    let m = 7usize;
    let g = FiniteGroup::cyclic(m);
    let mu = AtomicMeasure::from_counts([(0usize, 1), (1, 2), (3, 4)]).unwrap();
    let w = mu.atoms_f64();
    let hat = |j: usize| -> Complex64 {
        w.iter().map(|&(x, p)| Complex64::from_polar(p, -2.0 * PI * (j * x) as f64 / m as f64)).sum()
    };
    for n in [1usize, 2, 5, 13] {
        let exact = mu.power(&g, n);
        for x in 0..m {
            let f: Complex64 = (0..m)
                .map(|j| hat(j).powu(n as u32) * Complex64::from_polar(1.0, 2.0 * PI * (j * x) as f64 / m as f64))
                .sum::<Complex64>()
                / m as f64;
            assert!((exact.weight_f64(&x) - f.re).abs() < 1e-12);
        }
    }
}
