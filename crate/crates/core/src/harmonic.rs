//! Bounded μ-harmonic functions on finite groups, `f(g) = Σₕ f(gh) μ(h)`,
//! solved exactly.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Group};
use crate::matrix::RatMatrix;
use crate::measures::AtomicMeasure;

fn ser_rational_rows<S: Serializer>(rows: &[Vec<BigRational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
    text.serialize(s)
}

/// The space of μ-harmonic functions together with the left cosets of the
/// subgroup generated by the support.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicSpace {
    pub group: String,
    pub order: usize,
    /// Exact basis of `ker(I − P_μ)`, one value per group element.
    #[serde(serialize_with = "ser_rational_rows")]
    pub basis: Vec<Vec<BigRational>>,
    /// `G_μ`, the subgroup generated by the support.
    pub support_subgroup: BTreeSet<usize>,
    /// Left cosets `g G_μ`.
    pub cosets: Vec<Vec<usize>>,
}

impl HarmonicSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether `f` is constant on every left coset of `G_μ`.
    pub fn is_coset_constant(&self, f: &[BigRational]) -> bool {
        self.cosets.iter().all(|c| c.iter().all(|&g| f[g] == f[c[0]]))
    }

    /// Whether the harmonic functions are exactly the coset-constant ones.
    pub fn is_choquet_deny(&self) -> bool {
        self.dim() == self.cosets.len() && self.basis.iter().all(|f| self.is_coset_constant(f))
    }
}

/// The right-convolution operator `(P_μ f)(g) = Σₕ f(gh) μ(h)` as a matrix.
pub fn markov_operator(group: &FiniteGroup, mu: &AtomicMeasure<usize>) -> Result<RatMatrix> {
    let n = group.order();
    if let Some(&x) = mu.support().find(|&&x| x >= n) {
        return Err(Error::InvalidInput(format!("atom {x} outside a group of order {n}")));
    }
    let mut p = RatMatrix::zeros(n, n);
    for g in group.elements() {
        for (h, w) in mu.atoms() {
            let gh = group.op(&g, h);
            let v = p.get(g, gh) + &w;
            p.set(g, gh, v);
        }
    }
    Ok(p)
}

/// Whether `f = P_μ f` holds exactly.
pub fn is_harmonic(group: &FiniteGroup, mu: &AtomicMeasure<usize>, f: &[BigRational]) -> Result<bool> {
    if f.len() != group.order() {
        return Err(Error::Dimension { expected: group.order(), got: f.len() });
    }
    Ok(markov_operator(group, mu)?.mul_vec(f) == f)
}

/// Kernel of `I − P_μ` by exact elimination.
pub fn harmonic_space(group: &FiniteGroup, mu: &AtomicMeasure<usize>) -> Result<HarmonicSpace> {
    let p = markov_operator(group, mu)?;
    let n = group.order();
    let mut a = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let id = if i == j { BigRational::one() } else { BigRational::zero() };
            a.set(i, j, id - p.get(i, j));
        }
    }
    let basis = a.null_space();
    let support_subgroup = group.generated_subgroup(mu.support().copied());
    let cosets = group.left_cosets(&support_subgroup);
    Ok(HarmonicSpace { group: group.name().to_string(), order: n, basis, support_subgroup, cosets })
}

/// True iff the bounded harmonic functions are exactly the functions constant
/// on the left cosets of the subgroup generated by the support.
pub fn is_choquet_deny(group: &FiniteGroup, mu: &AtomicMeasure<usize>) -> Result<bool> {
    Ok(harmonic_space(group, mu)?.is_choquet_deny())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_on_z3_has_only_constants() {
        let g = FiniteGroup::cyclic(3);
        let h = harmonic_space(&g, &AtomicMeasure::uniform(0..3).unwrap()).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.is_choquet_deny());
    }

    #[test]
    fn rotation_on_z4() {
        let g = FiniteGroup::cyclic(4);
        let h = harmonic_space(&g, &AtomicMeasure::dirac(1)).unwrap();
        assert_eq!(h.dim(), 1);
        assert!(h.is_coset_constant(&h.basis[0]));
    }

    #[test]
    fn klein_four_with_subgroup_support() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        // elements are indexed a·2 + b; (1,0) is index 2
        let mu = AtomicMeasure::uniform([0usize, 2]).unwrap();
        let h = harmonic_space(&g, &mu).unwrap();
        assert_eq!(h.dim(), 2);
        assert_eq!(h.cosets.len(), 2);
        assert!(h.is_choquet_deny());
        for f in &h.basis {
            assert!(is_harmonic(&g, &mu, f).unwrap());
        }
    }

    #[test]
    fn identity_measure_makes_everything_harmonic() {
        let g = FiniteGroup::symmetric(3);
        let h = harmonic_space(&g, &AtomicMeasure::dirac(0)).unwrap();
        assert_eq!(h.dim(), 6);
        assert_eq!(h.cosets.len(), 6);
        assert!(h.is_choquet_deny());
    }

    #[test]
    fn coset_indicators_are_harmonic() {
        let g = FiniteGroup::dihedral(4);
        let mu = AtomicMeasure::from_counts([(1usize, 2), (2, 1)]).unwrap();
        let h = harmonic_space(&g, &mu).unwrap();
        for c in &h.cosets {
            let f: Vec<BigRational> =
                g.elements().map(|x| if c.contains(&x) { BigRational::one() } else { BigRational::zero() }).collect();
            assert!(is_harmonic(&g, &mu, &f).unwrap());
        }
    }
}
