use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{Automorphism, FiniteGroup, LatticeGroup, RationalPoint, RationalTorus, TorusPoint, TorusSpec};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::spectral_linalg::{char_poly_int, IntPolynomial};

/// A d×d integer matrix with determinant ±1, acting on 𝕋^d and ℤ^d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntAutomorphism {
    matrix: IntMatrix,
    inverse: IntMatrix,
    char_poly: IntPolynomial,
}

impl IntAutomorphism {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::InvalidInput("automorphism matrix must be square and nonempty".into()));
        }
        let inverse = matrix.inverse_unimodular()?;
        let char_poly = char_poly_int(&matrix);
        Ok(Self { matrix, inverse, char_poly })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(rows)?)
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(IntMatrix::parse(s)?)
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(IntMatrix::identity(dim)).expect("identity is unimodular")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn char_poly(&self) -> &IntPolynomial {
        &self.char_poly
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.inverse.clone(), inverse: self.matrix.clone(), char_poly: char_poly_int(&self.inverse) }
    }

    /// Matrix of `αⁿ` for any integer `n`.
    pub fn power_matrix(&self, n: i64) -> IntMatrix {
        if n >= 0 {
            self.matrix.pow(n as u64)
        } else {
            self.inverse.pow(n.unsigned_abs())
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        Self::new(self.power_matrix(n)).expect("powers of unimodular matrices are unimodular")
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.matrix.mul(&other.matrix)).expect("product of unimodular matrices")
    }

    pub fn apply_point(&self, x: &TorusPoint) -> TorusPoint {
        apply_wrapping(&self.matrix, x)
    }

    pub fn apply_rational(&self, x: &RationalPoint) -> RationalPoint {
        apply_rational_matrix(&self.matrix, x)
    }

    pub fn apply_lattice(&self, v: &[i64]) -> Result<Vec<i64>> {
        apply_checked(&self.matrix, v)
    }

    /// `Aᵀχ`, the dual action on characters: `χ(α(x)) = (Aᵀχ)(x)`.
    pub fn dual_apply(&self, chi: &[i64]) -> Result<Vec<i64>> {
        apply_checked(&self.matrix.transpose(), chi)
    }
}

/// `M x mod 1` for an integer matrix and an exact rational point.
pub fn apply_rational_matrix(m: &IntMatrix, x: &RationalPoint) -> RationalPoint {
    let coords = (0..m.rows())
        .map(|i| {
            m.row(i).iter().zip(x.coords()).map(|(a, c)| c * num_rational::BigRational::from_integer(a.clone())).sum()
        })
        .collect();
    RationalPoint::new(coords)
}

fn apply_checked(m: &IntMatrix, v: &[i64]) -> Result<Vec<i64>> {
    let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    m.mul_vec(&big)
        .into_iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("lattice coordinate {x}"))))
        .collect()
}

fn apply_wrapping(m: &IntMatrix, x: &TorusPoint) -> TorusPoint {
    let modulus: BigInt = BigInt::from(1u8) << 64;
    let entries: Vec<u64> = (0..m.rows())
        .flat_map(|i| m.row(i).to_vec())
        .map(|a| a.mod_floor(&modulus).to_u64().expect("reduced mod 2^64"))
        .collect();
    let d = m.cols();
    TorusPoint(
        (0..m.rows())
            .map(|i| (0..d).fold(0u64, |acc, j| acc.wrapping_add(entries[i * d + j].wrapping_mul(x.0[j]))))
            .collect(),
    )
}

/// Transpose: the induced automorphism of the character lattice ℤ^d.
pub fn dual_automorphism(a: &IntAutomorphism) -> IntAutomorphism {
    IntAutomorphism::new(a.matrix.transpose()).expect("transpose of unimodular is unimodular")
}

impl Automorphism<TorusSpec> for IntAutomorphism {
    fn apply_pow(&self, _group: &TorusSpec, x: &TorusPoint, n: i64) -> TorusPoint {
        apply_wrapping(&self.power_matrix(n), x)
    }
}

impl Automorphism<RationalTorus> for IntAutomorphism {
    fn apply_pow(&self, _group: &RationalTorus, x: &RationalPoint, n: i64) -> RationalPoint {
        apply_rational_matrix(&self.power_matrix(n), x)
    }
}

impl Automorphism<LatticeGroup> for IntAutomorphism {
    fn apply_pow(&self, _group: &LatticeGroup, x: &Vec<i64>, n: i64) -> Vec<i64> {
        apply_checked(&self.power_matrix(n), x).expect("lattice automorphism overflowed i64")
    }
}

/// An automorphism of a finite group given as a permutation of element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermAutomorphism {
    perm: Vec<usize>,
    inverse: Vec<usize>,
}

impl PermAutomorphism {
    pub fn new(group: &FiniteGroup, perm: Vec<usize>) -> Result<Self> {
        if !group.is_embedding(group, &perm) {
            return Err(Error::InvalidInput("permutation is not a group automorphism".into()));
        }
        let mut inverse = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p] = i;
        }
        Ok(Self { perm, inverse })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        Self::new(group, group.elements().collect()).expect("identity is an automorphism")
    }

    /// Inner automorphism `k ↦ g k g⁻¹`.
    pub fn inner(group: &FiniteGroup, g: usize) -> Self {
        Self::new(group, group.elements().map(|k| group.conjugate(g, k)).collect())
            .expect("conjugation is an automorphism")
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply_index(&self, x: usize) -> usize {
        self.perm[x]
    }
}

impl Automorphism<FiniteGroup> for PermAutomorphism {
    fn apply_pow(&self, _group: &FiniteGroup, x: &usize, n: i64) -> usize {
        let table = if n >= 0 { &self.perm } else { &self.inverse };
        (0..n.unsigned_abs()).fold(*x, |acc, _| table[acc])
    }
}
