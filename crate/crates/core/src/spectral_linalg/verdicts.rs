use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::cyclotomic::{cyclotomic_factorization, has_root_of_unity_factor};
use super::newton::{newton_polygon, prime_factors};
use super::roots::{isolate_roots, CertifiedRoot, Interval};
use super::{IntPolynomial, RatPolynomial};
use crate::error::{Error, Result};
use crate::groups::IntAutomorphism;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum DistalityVerdict {
    /// Every eigenvalue is a root of unity; `cyclotomic_factors` lists
    /// `(m, k)` for `Φ_m^k`.
    Distal { cyclotomic_factors: Vec<(u64, usize)> },
    /// `factor` is the part of the characteristic polynomial coprime to all
    /// cyclotomic polynomials; `witness` is its root of largest modulus.
    NonDistal { factor: IntPolynomial, witness: CertifiedRoot },
}

impl DistalityVerdict {
    pub fn is_distal(&self) -> bool {
        matches!(self, Self::Distal { .. })
    }
}

/// Distality of a toral automorphism via Kronecker's theorem on its
/// characteristic polynomial.
pub fn distality_verdict(a: &IntAutomorphism) -> Result<DistalityVerdict> {
    distality_verdict_poly(a.char_poly())
}

pub fn distality_verdict_poly(f: &IntPolynomial) -> Result<DistalityVerdict> {
    let (cyclotomic_factors, rest) = cyclotomic_factorization(f)?;
    if rest.is_constant() {
        return Ok(DistalityVerdict::Distal { cyclotomic_factors });
    }
    let witness = largest_root(&rest.to_rational())?;
    if !witness.modulus.excludes(1.0) {
        return Err(Error::Indeterminate(format!("largest root modulus of {rest} not separated from 1")));
    }
    Ok(DistalityVerdict::NonDistal { factor: rest, witness })
}

fn largest_root(f: &RatPolynomial) -> Result<CertifiedRoot> {
    isolate_roots(f)?
        .into_iter()
        .max_by(|a, b| a.modulus.mid().total_cmp(&b.modulus.mid()))
        .ok_or_else(|| Error::InvalidInput("constant polynomial has no roots".into()))
}

/// Ergodic on 𝕋^d iff no eigenvalue is a root of unity.
pub fn ergodicity_verdict(a: &IntAutomorphism) -> bool {
    !has_root_of_unity_factor(a.char_poly())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Trichotomy {
    /// Some coefficient is not an integer; `root_valuation` is a nonzero
    /// p-adic valuation of an eigenvalue, so |λ|_p ≠ 1.
    NonIntegerCoefficient {
        prime: u64,
        root_valuation: BigRational,
    },
    IntegerRootsOfUnity,
    /// Integer coefficients, not all roots of unity: `modulus` brackets the
    /// root modulus farthest from 1.
    IntegerOffUnitCircle {
        modulus: Interval,
    },
}

pub fn integrality_trichotomy(f: &RatPolynomial) -> Result<Trichotomy> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    if !f.is_integral() {
        let denom_lcm = f.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let d = denom_lcm.to_u64().ok_or_else(|| Error::Overflow("coefficient denominator".into()))?;
        let prime = prime_factors(d)[0];
        let root_valuation = newton_polygon(f, prime)?
            .root_valuations()
            .into_iter()
            .min()
            .filter(|v| !v.is_zero())
            .expect("a coefficient of negative valuation bends the polygon");
        return Ok(Trichotomy::NonIntegerCoefficient { prime, root_valuation });
    }
    let g = f.to_integer().expect("integral");
    let (_, rest) = cyclotomic_factorization(&g)?;
    if rest.is_constant() {
        return Ok(Trichotomy::IntegerRootsOfUnity);
    }
    let far = isolate_roots(&rest.to_rational())?
        .into_iter()
        .max_by(|a, b| a.modulus.mid().ln().abs().total_cmp(&b.modulus.mid().ln().abs()))
        .expect("nonconstant");
    if !far.modulus.excludes(1.0) {
        return Err(Error::Indeterminate(format!("no root of {rest} separated from the unit circle")));
    }
    Ok(Trichotomy::IntegerOffUnitCircle { modulus: far.modulus })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn auto(rows: &[Vec<i64>]) -> IntAutomorphism {
        IntAutomorphism::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn distality_examples() {
        assert!(distality_verdict(&auto(&[vec![1, 1], vec![0, 1]])).unwrap().is_distal());
        assert!(distality_verdict(&auto(&[vec![0, -1], vec![1, 0]])).unwrap().is_distal());
        match distality_verdict(&auto(&[vec![2, 1], vec![1, 1]])).unwrap() {
            DistalityVerdict::NonDistal { factor, witness } => {
                assert_eq!(factor, IntPolynomial::from_i64(&[1, -3, 1]));
                assert!(witness.modulus.contains((3.0 + 5f64.sqrt()) / 2.0));
                assert!(witness.modulus.width() <= 1e-9);
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn ergodicity_examples() {
        assert!(ergodicity_verdict(&auto(&[vec![2, 1], vec![1, 1]])));
        assert!(!ergodicity_verdict(&auto(&[vec![1, 1], vec![0, 1]])));
        assert!(!ergodicity_verdict(&IntAutomorphism::identity(3)));
    }

    #[test]
    fn trichotomy_examples() {
        match integrality_trichotomy(&IntPolynomial::from_i64(&[-2, 1]).to_rational()).unwrap() {
            Trichotomy::IntegerOffUnitCircle { modulus } => assert!(modulus.contains(2.0)),
            t => panic!("{t:?}"),
        }
        let f = RatPolynomial::from_fractions(&[(1, 1), (-5, 2), (1, 1)]);
        match integrality_trichotomy(&f).unwrap() {
            Trichotomy::NonIntegerCoefficient { prime, root_valuation } => {
                assert_eq!(prime, 2);
                assert_eq!(root_valuation, BigRational::from_integer((-1).into()));
            }
            t => panic!("{t:?}"),
        }
        assert_eq!(
            integrality_trichotomy(&IntPolynomial::from_i64(&[1, -1, 1]).to_rational()).unwrap(),
            Trichotomy::IntegerRootsOfUnity
        );
        assert!(matches!(
            integrality_trichotomy(&RatPolynomial::from_fractions(&[(1, 1), (2, 1)])),
            Err(Error::NotMonic)
        ));
    }
}
