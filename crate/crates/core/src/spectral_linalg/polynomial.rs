use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

/// Dense univariate polynomial, coefficients stored constant term first and
/// trimmed so the last entry is nonzero (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<T: Clone + Num + Neg<Output = T>> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    /// `c·xⁿ`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// `xⁿ − 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[0] = -T::one();
        coeffs[n] = T::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut n = T::zero();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.clone() * n.clone());
            n = n + T::one();
        }
        if !out.is_empty() {
            out.remove(0);
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Composition `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * g) + &Self::constant(c.clone()))
    }

    /// Division by a monic divisor; exact over any coefficient ring.
    pub fn divrem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = rem[i + dd].clone();
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - q.clone() * d.clone();
            }
            quot[i] = q;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// `self mod divisor` for monic divisors.
    pub fn rem_monic(&self, divisor: &Self) -> Self {
        self.divrem_monic(divisor).1
    }

    /// `xⁿ mod divisor` by repeated squaring.
    pub fn x_pow_mod(n: u64, divisor: &Self) -> Self {
        let mut result = Self::one().rem_monic(divisor);
        let mut base = Self::x().rem_monic(divisor);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = (&result * &base).rem_monic(divisor);
            }
            base = (&base * &base).rem_monic(divisor);
            e >>= 1;
        }
        result
    }

    pub fn map<U: Clone + Num + Neg<Output = U>>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn to_rational(&self) -> RatPolynomial {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect()
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(ToPrimitive::to_i64).collect()
    }

    /// Exact division test by a monic integer polynomial.
    pub fn divides(divisor: &Self, f: &Self) -> bool {
        f.rem_monic(divisor).is_zero()
    }
}

impl RatPolynomial {
    pub fn from_fractions(coeffs: &[(i64, i64)]) -> Self {
        Self::new(coeffs.iter().map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q))).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.is_integral().then(|| self.map(|c| c.to_integer()))
    }

    /// Monic associate (leading coefficient 1); zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&(BigRational::one() / lc))
    }

    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let lc = divisor.leading();
        let (q, r) = self.divrem_monic(&divisor.monic());
        (q.scale(&(BigRational::one() / lc)), r)
    }

    /// Monic greatest common divisor over ℚ.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Exact quotient, panicking if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0)).collect()
    }

    /// Squarefree decomposition (Yun): `f = lc · ∏ gᵢ^i` with monic, pairwise
    /// coprime, squarefree `gᵢ`. Returns `(gᵢ, i)` for nonconstant factors.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        if f.is_constant() {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            let nb = b.exact_div(&a);
            let nc = d.exact_div(&a);
            d = &nc - &nb.derivative();
            b = nb;
            i += 1;
        }
        out
    }
}

impl<T: Clone + Num + Neg<Output = T>> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Clone + Num + Neg<Output = T>> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Clone + Num + Neg<Output = T>> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<T: Clone + Num + Neg<Output = T> + Signed + fmt::Display> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

fn serialize_bigint<S: SerializeSeq>(seq: &mut S, c: &BigInt) -> Result<(), S::Error> {
    match c.to_i64() {
        Some(v) => seq.serialize_element(&v),
        None => seq.serialize_element(&c.to_string()),
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            serialize_bigint(&mut seq, c)?;
        }
        seq.end()
    }
}

impl Serialize for RatPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            if c.is_integer() {
                serialize_bigint(&mut seq, c.numer())?;
            } else {
                seq.serialize_element(&c.to_string())?;
            }
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn arithmetic_and_display() {
        let f = ip(&[1, -3, 1]);
        assert_eq!(f.to_string(), "x^2 - 3x + 1");
        assert_eq!(&f * &ip(&[-1, 1]), ip(&[-1, 4, -4, 1]));
        assert_eq!(f.derivative(), ip(&[-3, 2]));
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(1));
        assert_eq!(ip(&[0, 0, 0]).degree(), None);
    }

    #[test]
    fn monic_division() {
        let f = ip(&[-1, 0, 0, 0, 1]);
        let (q, r) = f.divrem_monic(&ip(&[1, 0, 1]));
        assert_eq!(q, ip(&[-1, 0, 1]));
        assert!(r.is_zero());
        let xp = IntPolynomial::x_pow_mod(10, &ip(&[1, 0, 1]));
        assert_eq!(xp, ip(&[-1]));
    }

    #[test]
    fn rational_gcd_and_yun() {
        let a = ip(&[-1, 1]).to_rational();
        let b = ip(&[1, -3, 1]).to_rational();
        let f = &(&a.pow(3) * &b) * &ip(&[1, 0, 1]).to_rational().pow(2);
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(b.clone(), 1), (ip(&[1, 0, 1]).to_rational(), 2), (a.clone(), 3)]);
        assert_eq!(f.gcd(&a.pow(2)), a.pow(2));
    }
}
