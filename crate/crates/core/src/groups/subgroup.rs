use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::lattice::smith_normal_form;
use super::{shift_apply, FiniteGroup, IntAutomorphism, Lattice, Profile, RationalPoint, TorusPoint};
use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix};

/// A closed subgroup of 𝕋^d, recorded by its annihilator
/// Λ = {χ ∈ ℤ^d : χ(x) = 1 for all x in the subgroup}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusSubgroup {
    annihilator: Lattice,
    invariant_factors: Vec<i64>,
}

impl TorusSubgroup {
    pub fn from_annihilator(annihilator: Lattice) -> Self {
        let invariant_factors = if annihilator.rank() == 0 {
            Vec::new()
        } else {
            smith_normal_form(&annihilator.basis_matrix())
                .diagonal
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| x.to_i64().expect("factor of an i64 lattice"))
                .collect()
        };
        Self { annihilator, invariant_factors }
    }

    pub fn trivial(dim: usize) -> Self {
        Self::from_annihilator(Lattice::full(dim))
    }

    pub fn full(dim: usize) -> Self {
        Self::from_annihilator(Lattice::zero(dim))
    }

    /// `{0, 1/k}^d`-style subgroup `(1/k)ℤ^d / ℤ^d`.
    pub fn torsion(dim: usize, k: i64) -> Self {
        Self::from_annihilator(Lattice::scaled_full(dim, k))
    }

    /// Closed subgroup generated by finitely many rational points.
    pub fn generated_by(dim: usize, points: &[RationalPoint]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::Dimension { expected: dim, got: p.dim() });
        }
        if points.is_empty() {
            return Ok(Self::trivial(dim));
        }
        let q: BigInt =
            points.iter().map(|p| p.denominator()).fold(BigInt::one(), |a, b| num_integer::Integer::lcm(&a, &b));
        let q64 = q.to_i64().ok_or_else(|| Error::Overflow("denominator".into()))?;
        let rows: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.coords().iter().map(|c| (c * BigRational::from_integer(q.clone())).to_integer()).collect())
            .collect();
        let m = IntMatrix::from_rows(rows)?;
        let ann = Lattice::scaled_full(points.len(), q64).preimage(&m)?;
        Ok(Self::from_annihilator(ann))
    }

    pub fn dim(&self) -> usize {
        self.annihilator.dim()
    }

    pub fn annihilator(&self) -> &Lattice {
        &self.annihilator
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn is_finite(&self) -> bool {
        self.annihilator.is_full_rank()
    }

    /// Dimension of the identity component.
    pub fn connected_dim(&self) -> usize {
        self.dim() - self.annihilator.rank()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.annihilator.index()
    }

    pub fn contains_rational(&self, x: &RationalPoint) -> bool {
        self.annihilator.basis().iter().all(|chi| x.phase(chi).is_zero())
    }

    pub fn contains_point(&self, x: &TorusPoint) -> bool {
        self.annihilator.basis().iter().all(|chi| x.phase(chi) == 0)
    }

    /// The elements of a finite subgroup, as exact rational points.
    pub fn elements(&self) -> Result<Vec<RationalPoint>> {
        if !self.is_finite() {
            return Err(Error::Unsupported("enumerating a positive-dimensional subgroup".into()));
        }
        let d = self.dim();
        // U B V = D  ⇒  x = V y with y_i ∈ (1/d_i)ℤ
        let s = smith_normal_form(&self.annihilator.basis_matrix());
        let factors: Vec<i64> = s.diagonal.iter().map(|x| x.to_i64().expect("i64")).collect();
        let mut out = Vec::new();
        let mut idx = vec![0i64; d];
        loop {
            let y: Vec<BigRational> =
                (0..d).map(|i| BigRational::new(BigInt::from(idx[i]), BigInt::from(factors[i]))).collect();
            let coords = (0..d)
                .map(|r| (0..d).map(|c| &y[c] * BigRational::from_integer(s.v.get(r, c).clone())).sum())
                .collect();
            out.push(RationalPoint::new(coords));
            let mut k = 0;
            loop {
                if k == d {
                    out.sort();
                    out.dedup();
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < factors[k] {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// `α(K)`: its annihilator is `{χ : Aᵀχ ∈ Λ}`.
    pub fn image(&self, alpha: &IntAutomorphism) -> Result<Self> {
        let at = alpha.matrix().transpose();
        Ok(Self::from_annihilator(self.annihilator.preimage(&at)?))
    }

    pub fn is_invariant(&self, alpha: &IntAutomorphism) -> Result<bool> {
        Ok(self.image(alpha)? == *self)
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        other.annihilator.is_sublattice_of(&self.annihilator)
    }
}

/// A subgroup of one of the supported group families.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubgroupDescriptor {
    Finite {
        elements: BTreeSet<usize>,
    },
    Torus(TorusSubgroup),
    Profile {
        coordinates: Profile<BTreeSet<usize>>,
    },
    /// The only compact subgroup of ℤ^d.
    LatticeTrivial {
        dim: usize,
    },
}

impl SubgroupDescriptor {
    pub fn finite(group: &FiniteGroup, elements: BTreeSet<usize>) -> Result<Self> {
        if !group.is_subgroup(&elements) {
            return Err(Error::InvalidInput("index set is not a subgroup".into()));
        }
        Ok(Self::Finite { elements })
    }

    pub fn profile(symbols: &FiniteGroup, coordinates: Profile<BTreeSet<usize>>) -> Result<Self> {
        if !coordinates.all(|s| symbols.is_subgroup(s)) {
            return Err(Error::InvalidInput("profile coordinate is not a subgroup".into()));
        }
        Ok(Self::Profile { coordinates })
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            Self::Finite { elements } => elements.len() == 1,
            Self::Torus(t) => t.annihilator().is_full_rank() && t.invariant_factors().iter().all(|&f| f == 1),
            Self::Profile { coordinates } => coordinates.all(|s| s.len() == 1),
            Self::LatticeTrivial { .. } => true,
        }
    }

    /// Short human-readable summary used in reports.
    pub fn describe(&self) -> String {
        match self {
            Self::Finite { elements } => format!("finite subgroup of order {}", elements.len()),
            Self::Torus(t) => match t.order() {
                Some(o) => format!("finite torus subgroup of order {o}, invariant factors {:?}", t.invariant_factors()),
                None => format!("torus subgroup with {}-dimensional identity component", t.connected_dim()),
            },
            Self::Profile { coordinates } => format!(
                "profile subgroup: orders {} on the left tail, {} on the right tail",
                coordinates.left().len(),
                coordinates.right().len()
            ),
            Self::LatticeTrivial { .. } => "trivial subgroup".into(),
        }
    }
}

/// Canonical subgroup annihilated by the lattice spanned by the columns of
/// `lattice_basis` (a d×k integer matrix).
pub fn smith_annihilator(lattice_basis: &IntMatrix) -> Result<SubgroupDescriptor> {
    let gens = lattice_basis.transpose().to_i64_rows()?;
    let lattice = Lattice::from_generators(lattice_basis.rows(), &gens)?;
    Ok(SubgroupDescriptor::Torus(TorusSubgroup::from_annihilator(lattice)))
}

/// As [`smith_annihilator`], rejecting non-integral entries.
pub fn smith_annihilator_rational(lattice_basis: &RatMatrix) -> Result<SubgroupDescriptor> {
    if !lattice_basis.is_integral() {
        return Err(Error::InvalidInput("annihilator basis has non-integer entries".into()));
    }
    smith_annihilator(&lattice_basis.map(|x| x.to_integer()))
}

/// Whether conjugation by the shift power `m` maps a profile subgroup onto itself.
pub fn profile_normalized(coordinates: &Profile<BTreeSet<usize>>, m: i64) -> bool {
    shift_apply(coordinates, m) == *coordinates
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus(desc: SubgroupDescriptor) -> TorusSubgroup {
        match desc {
            SubgroupDescriptor::Torus(t) => t,
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn two_z_annihilates_half() {
        let t = torus(smith_annihilator(&IntMatrix::from_i64_rows(&[vec![2]]).unwrap()).unwrap());
        let elems = t.elements().unwrap();
        assert_eq!(
            elems,
            vec![RationalPoint::from_fractions(&[(0, 1)]).unwrap(), RationalPoint::from_fractions(&[(1, 2)]).unwrap()]
        );
    }

    #[test]
    fn full_and_zero_annihilators() {
        let full = torus(smith_annihilator(&IntMatrix::identity(3)).unwrap());
        assert!(SubgroupDescriptor::Torus(full.clone()).is_trivial());
        assert_eq!(full.elements().unwrap().len(), 1);
        let zero = torus(smith_annihilator(&IntMatrix::zeros(2, 1)).unwrap());
        assert_eq!(zero, TorusSubgroup::full(2));
        assert_eq!(zero.connected_dim(), 2);
    }

    #[test]
    fn rejects_fractional_basis() {
        let m = RatMatrix::from_rows(vec![vec![BigRational::new(1.into(), 2.into())]]).unwrap();
        assert!(smith_annihilator_rational(&m).is_err());
    }

    #[test]
    fn generated_subgroup_matches_annihilator() {
        let half = RationalPoint::from_fractions(&[(1, 2), (0, 1)]).unwrap();
        let other = RationalPoint::from_fractions(&[(0, 1), (1, 2)]).unwrap();
        let k = TorusSubgroup::generated_by(2, &[half, other]).unwrap();
        assert_eq!(k, TorusSubgroup::torsion(2, 2));
        assert_eq!(k.elements().unwrap().len(), 4);
        let third = RationalPoint::from_fractions(&[(1, 3), (2, 3)]).unwrap();
        let c3 = TorusSubgroup::generated_by(2, std::slice::from_ref(&third)).unwrap();
        let elems = c3.elements().unwrap();
        assert_eq!(elems.len(), 3);
        assert!(elems.contains(&third));
        assert!(elems.iter().all(|e| c3.contains_rational(e)));
    }

    #[test]
    fn invariance_under_automorphisms() {
        let k = TorusSubgroup::torsion(2, 2);
        let unip = IntAutomorphism::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let cat = IntAutomorphism::from_i64_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        assert!(k.is_invariant(&unip).unwrap());
        assert!(k.is_invariant(&cat).unwrap());
        let line =
            TorusSubgroup::generated_by(2, &[RationalPoint::from_fractions(&[(1, 2), (0, 1)]).unwrap()]).unwrap();
        assert!(line.is_invariant(&unip).unwrap());
        assert!(!line.is_invariant(&cat).unwrap());
        let img = line.image(&cat).unwrap();
        let expected =
            TorusSubgroup::generated_by(2, &[RationalPoint::from_fractions(&[(0, 1), (1, 2)]).unwrap()]).unwrap();
        assert_eq!(img, expected);
    }
}
