use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::RatPolynomial;
use crate::error::{Error, Result};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &BigRational, p: u64) -> Option<i64> {
    Some(valuation_int(q.numer(), p)? - valuation_int(q.denom(), p)?)
}

/// Prime factors of a positive integer that fits in `u64`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lower convex hull of the points `(i, v_p(aᵢ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: u64,
    pub vertices: Vec<(usize, i64)>,
    /// `(slope, horizontal length)` for each edge, left to right.
    pub slopes: Vec<(BigRational, usize)>,
}

impl NewtonPolygon {
    /// Root valuations with multiplicity; a root's valuation is the negative
    /// of the slope of the edge it belongs to.
    pub fn root_valuations(&self) -> Vec<BigRational> {
        self.slopes.iter().flat_map(|(s, len)| std::iter::repeat_n(-s.clone(), *len)).collect()
    }

    pub fn degree(&self) -> usize {
        self.slopes.iter().map(|(_, l)| l).sum()
    }
}

pub fn newton_polygon(f: &RatPolynomial, p: u64) -> Result<NewtonPolygon> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    let points: Vec<(usize, i64)> =
        f.coeffs().iter().enumerate().filter_map(|(i, c)| valuation(c, p).map(|v| (i, v))).collect();
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 as i128 - o.0 as i128) * (pt.1 as i128 - o.1 as i128)
                - (a.1 as i128 - o.1 as i128) * (pt.0 as i128 - o.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let slopes = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            (BigRational::new(BigInt::from(w[1].1 - w[0].1), BigInt::from(len)), len)
        })
        .collect();
    Ok(NewtonPolygon { prime: p, vertices: hull, slopes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_linalg::IntPolynomial;

    fn vals(f: &RatPolynomial, p: u64) -> Vec<BigRational> {
        let mut v = newton_polygon(f, p).unwrap().root_valuations();
        v.sort();
        v
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn examples() {
        assert_eq!(vals(&IntPolynomial::from_i64(&[-2, 1]).to_rational(), 2), vec![r(1)]);
        assert_eq!(vals(&IntPolynomial::from_i64(&[1, -3, 1]).to_rational(), 5), vec![r(0), r(0)]);
        let f = RatPolynomial::from_fractions(&[(1, 1), (-5, 2), (1, 1)]);
        assert_eq!(vals(&f, 2), vec![r(-1), r(1)]);
    }

    #[test]
    fn fractional_slopes() {
        // x² − 2: both roots have 2-adic valuation ½
        let f = IntPolynomial::from_i64(&[-2, 0, 1]).to_rational();
        assert_eq!(vals(&f, 2), vec![BigRational::new(1.into(), 2.into()); 2]);
    }

    #[test]
    fn errors() {
        let f = IntPolynomial::from_i64(&[1, 1]).to_rational();
        assert!(matches!(newton_polygon(&f, 4), Err(Error::NotPrime(4))));
        let g = IntPolynomial::from_i64(&[0, 1]).to_rational();
        assert!(matches!(newton_polygon(&g, 2), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn primes() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert!(is_prime(97) && !is_prime(1) && !is_prime(91));
    }
}
