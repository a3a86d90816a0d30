use num_integer::Integer;
use num_traits::Zero;

use super::{IntPolynomial, RatPolynomial};
use crate::error::{Error, Result};

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut phi = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

/// The m-th cyclotomic polynomial Φ_m.
pub fn cyclotomic(m: u64) -> IntPolynomial {
    assert!(m > 0, "cyclotomic index must be positive");
    let mut f = IntPolynomial::x_pow_minus_one(m as usize);
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        f = f.divrem_monic(&cyclotomic(d)).0;
    }
    f
}

/// All `m` with φ(m) ≤ `degree`: the possible orders of roots of unity that
/// are roots of a rational polynomial of that degree.
pub fn root_of_unity_orders(degree: usize) -> Vec<u64> {
    let d = degree as u64;
    // φ(m) ≥ √(m/2)
    (1..=2 * d * d + 2).filter(|&m| euler_phi(m) <= d).collect()
}

/// `N = lcm{m : φ(m) ≤ degree}`.
pub fn root_of_unity_bound(degree: usize) -> u64 {
    root_of_unity_orders(degree).into_iter().fold(1, |acc, m| acc.lcm(&m))
}

fn check_kronecker_input(f: &IntPolynomial) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.coeff(0).is_zero() {
        return Err(Error::ZeroConstantTerm);
    }
    Ok(())
}

/// Splits off cyclotomic factors: `f = rest · ∏ Φ_m^{k}`, returned as
/// `([(m, k)], rest)` with `rest` coprime to every cyclotomic polynomial.
pub fn cyclotomic_factorization(f: &IntPolynomial) -> Result<(Vec<(u64, usize)>, IntPolynomial)> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let deg = f.degree().unwrap_or(0);
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for m in root_of_unity_orders(deg) {
        let phi = cyclotomic(m);
        let mut k = 0;
        loop {
            let (q, r) = rest.divrem_monic(&phi);
            if !r.is_zero() {
                break;
            }
            rest = q;
            k += 1;
        }
        if k > 0 {
            factors.push((m, k));
        }
    }
    Ok((factors, rest))
}

/// Kronecker's criterion: a monic integer polynomial with nonzero constant
/// term has all roots on the unit circle iff it is a product of cyclotomic
/// polynomials.
pub fn kronecker_all_roots_unit_modulus(f: &IntPolynomial) -> Result<bool> {
    check_kronecker_input(f)?;
    let (_, rest) = cyclotomic_factorization(f)?;
    Ok(rest.is_constant())
}

/// Whether `f` and `x^N − 1` share a factor over ℚ, with `N` from
/// [`root_of_unity_bound`].
pub fn has_root_of_unity_factor(f: &IntPolynomial) -> bool {
    has_root_of_unity_factor_rat(&f.to_rational())
}

pub fn has_root_of_unity_factor_rat(f: &RatPolynomial) -> bool {
    assert!(!f.is_zero(), "zero polynomial");
    let Some(deg) = f.degree().filter(|&d| d > 0) else {
        return false;
    };
    let n = root_of_unity_bound(deg);
    let g = f.monic();
    let xn = RatPolynomial::x_pow_mod(n, &g);
    let reduced = &xn - &RatPolynomial::one();
    !g.gcd(&reduced).is_constant()
}
