use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::Group;
use crate::error::{Error, Result};

/// The torus 𝕋^d = ℝ^d/ℤ^d; its characters are indexed by ℤ^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TorusSpec {
    pub dim: usize,
}

impl TorusSpec {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "torus dimension must be positive");
        Self { dim }
    }

    pub fn trivial_character(&self) -> Vec<i64> {
        vec![0; self.dim]
    }
}

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;

/// A torus point with coordinates in 2⁻⁶⁴ℤ/ℤ. Addition wraps, so the group
/// law is exact on this grid; dyadic points such as ½ are represented exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint(pub Vec<u64>);

impl TorusPoint {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn from_f64(coords: &[f64]) -> Self {
        Self(
            coords
                .iter()
                .map(|&x| {
                    let frac = x - x.floor();
                    // frac * 2^64 can round to 2^64 itself
                    let v = frac * TWO_POW_64;
                    if v >= TWO_POW_64 {
                        0
                    } else {
                        v as u64
                    }
                })
                .collect(),
        )
    }

    /// Nearest grid point to an exact rational point.
    pub fn from_rational(p: &RationalPoint) -> Self {
        let scale: BigInt = BigInt::from(1u8) << 64;
        Self(
            p.coords
                .iter()
                .map(|c| {
                    let scaled = (c * BigRational::from_integer(scale.clone())).round().to_integer();
                    scaled.mod_floor(&scale).to_u64().expect("reduced below 2^64")
                })
                .collect(),
        )
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&x| x as f64 / TWO_POW_64).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.wrapping_add(*b)).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| a.wrapping_neg()).collect())
    }

    /// `χ·x mod 1` in units of 2⁻⁶⁴, computed exactly.
    pub fn phase(&self, chi: &[i64]) -> u64 {
        self.0.iter().zip(chi).fold(0u64, |acc, (&x, &c)| acc.wrapping_add((c as u64).wrapping_mul(x)))
    }

    /// `χ(x) = e^{2πi χ·x}`.
    pub fn character(&self, chi: &[i64]) -> Complex64 {
        phase_to_unit(self.phase(chi))
    }
}

/// `e^{2πi p/2⁶⁴}`, using the centered representative for accuracy.
pub(crate) fn phase_to_unit(p: u64) -> Complex64 {
    if p.is_multiple_of(1 << 62) {
        return quarter_turn(p >> 62);
    }
    let centered = p as i64;
    Complex64::from_polar(1.0, TAU * (centered as f64 / TWO_POW_64))
}

/// `i^k`, exactly.
fn quarter_turn(k: u64) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// An exact rational point of 𝕋^d with coordinates in [0,1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords: coords.into_iter().map(|c| reduce_mod_one(&c)).collect() }
    }

    pub fn from_fractions(fracs: &[(i64, i64)]) -> Result<Self> {
        if fracs.iter().any(|&(_, d)| d == 0) {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self::new(fracs.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect()))
    }

    pub fn zero(dim: usize) -> Self {
        Self { coords: vec![BigRational::zero(); dim] }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coords.iter().map(|a| -a).collect())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.coords.iter().fold(BigInt::from(1), |acc, c| acc.lcm(c.denom()))
    }

    /// `χ·x mod 1`, exactly.
    pub fn phase(&self, chi: &[i64]) -> BigRational {
        reduce_mod_one(&self.coords.iter().zip(chi).map(|(c, &k)| c * BigRational::from_integer(k.into())).sum())
    }

    pub fn character(&self, chi: &[i64]) -> Complex64 {
        let p = self.phase(chi);
        let four = &p * BigRational::from_integer(4.into());
        if four.is_integer() {
            return quarter_turn(four.to_integer().to_u64().unwrap_or(0));
        }
        let q = p.to_f64().unwrap_or(0.0);
        let centered = if q > 0.5 { q - 1.0 } else { q };
        Complex64::from_polar(1.0, TAU * centered)
    }

    pub fn to_point(&self) -> TorusPoint {
        TorusPoint::from_rational(self)
    }

    pub fn label(&self) -> String {
        format!("({})", self.coords.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))
    }
}

fn reduce_mod_one(c: &BigRational) -> BigRational {
    c - c.floor()
}

impl Group for TorusSpec {
    type Elem = TorusPoint;

    fn identity(&self) -> TorusPoint {
        TorusPoint::zero(self.dim)
    }

    fn op(&self, a: &TorusPoint, b: &TorusPoint) -> TorusPoint {
        a.add(b)
    }

    fn inverse(&self, a: &TorusPoint) -> TorusPoint {
        a.neg()
    }

    fn label(&self, a: &TorusPoint) -> String {
        format!("{:?}", a.to_f64())
    }
}

/// 𝕋^d restricted to its rational points, with exact arithmetic. Every
/// finitely generated subgroup is finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RationalTorus {
    pub dim: usize,
}

impl Group for RationalTorus {
    type Elem = RationalPoint;

    fn identity(&self) -> RationalPoint {
        RationalPoint::zero(self.dim)
    }

    fn op(&self, a: &RationalPoint, b: &RationalPoint) -> RationalPoint {
        a.add(b)
    }

    fn inverse(&self, a: &RationalPoint) -> RationalPoint {
        a.neg()
    }

    fn label(&self, a: &RationalPoint) -> String {
        a.label()
    }
}

/// The lattice group ℤ^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeGroup {
    pub dim: usize,
}

impl Group for LatticeGroup {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn op(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inverse(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_points_are_exact() {
        let half = TorusPoint::from_f64(&[0.5]);
        assert_eq!(half.add(&half), TorusPoint::zero(1));
        assert!((half.character(&[1]) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let q = RationalPoint::from_fractions(&[(1, 2)]).unwrap();
        assert_eq!(q.to_point(), half);
    }

    #[test]
    fn rational_phase_is_exact() {
        let p = RationalPoint::from_fractions(&[(1, 3), (2, 5)]).unwrap();
        assert_eq!(p.phase(&[3, 5]), BigRational::zero());
        assert_eq!(p.denominator(), BigInt::from(15));
        assert!((p.character(&[3, 5]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let sum = p.add(&p.neg());
        assert_eq!(sum, RationalPoint::zero(2));
    }

    #[test]
    fn negative_coordinates_wrap() {
        let a = TorusPoint::from_f64(&[-0.25]);
        assert_eq!(a, TorusPoint::from_f64(&[0.75]));
    }
}
