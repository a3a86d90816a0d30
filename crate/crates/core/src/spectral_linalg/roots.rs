use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::RatPolynomial;
use crate::error::{Error, Result};

/// Target width for certified modulus intervals.
pub const MODULUS_WIDTH: f64 = 1e-9;

/// A closed real interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn below(&self, x: f64) -> bool {
        self.hi < x
    }

    pub fn above(&self, x: f64) -> bool {
        self.lo > x
    }

    pub fn excludes(&self, x: f64) -> bool {
        self.below(x) || self.above(x)
    }
}

/// A root known to lie in the closed disk `|z − center| ≤ radius`, with no
/// other root of the same squarefree factor in that disk.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedRoot {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub modulus: Interval,
    pub multiplicity: usize,
}

impl CertifiedRoot {
    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug)]
struct CRat {
    re: BigRational,
    im: BigRational,
}

impl CRat {
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(Self { re: BigRational::from_float(z.re)?, im: BigRational::from_float(z.im)? })
    }

    fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn sub(&self, o: &Self) -> Self {
        Self { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        Self { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn add_real(&self, c: &BigRational) -> Self {
        Self { re: &self.re + c, im: self.im.clone() }
    }
}

fn eval_exact(f: &RatPolynomial, z: &CRat) -> CRat {
    let zero = CRat { re: BigRational::zero(), im: BigRational::zero() };
    f.coeffs().iter().rev().fold(zero, |acc, c| acc.mul(z).add_real(c))
}

fn eval_f64(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn aberth(coeffs: &[Complex64], offset: f64, max_iter: usize) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let bound = 1.0 + coeffs[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let radius = bound.min(1e6).max(1e-3) * 0.5 + 0.25;
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + offset)).collect();
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = eval_f64(coeffs, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_f64(coeffs, *zi);
            let step = p / dp;
            if step.is_finite() {
                *zi -= step;
            }
        }
    }
    z
}

fn sqrt_upper(x: &BigRational) -> Option<f64> {
    if x.is_zero() {
        return Some(0.0);
    }
    let mut r = x.to_f64()?.sqrt();
    if !r.is_finite() {
        return None;
    }
    loop {
        let rr = BigRational::from_float(r)?;
        if &(&rr * &rr) >= x {
            return Some(r);
        }
        r = r.next_up();
    }
}

/// Inclusion radii `n·|f(zᵢ)/∏_{j≠i}(zᵢ − zⱼ)|` for monic `f`, computed
/// exactly and rounded up, provided the disks are pairwise disjoint.
fn inclusion_radii(f: &RatPolynomial, z: &[Complex64]) -> Option<Vec<f64>> {
    let n = z.len();
    let zr: Vec<CRat> = z.iter().map(|&c| CRat::from_c64(c)).collect::<Option<_>>()?;
    let nn = BigRational::from_integer(BigInt::from(n * n));
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let num = eval_exact(f, &zr[i]).norm_sqr();
        let mut den = BigRational::from_integer(BigInt::from(1));
        for j in (0..n).filter(|&j| j != i) {
            den *= zr[i].sub(&zr[j]).norm_sqr();
        }
        if den.is_zero() {
            return None;
        }
        radii.push(sqrt_upper(&(&nn * num / den))?);
    }
    for i in 0..n {
        for j in i + 1..n {
            let sum = BigRational::from_float(radii[i])? + BigRational::from_float(radii[j])?;
            if &sum * &sum >= zr[i].sub(&zr[j]).norm_sqr() {
                return None;
            }
        }
    }
    Some(radii)
}

fn modulus_interval(z: Complex64, r: f64) -> Interval {
    let m = z.norm();
    let lo = (m - r).next_down().next_down().max(0.0);
    let hi = (m + r).next_up().next_up();
    Interval::new(lo, hi)
}

/// Certified isolation of the roots of a squarefree rational polynomial.
pub fn isolate_squarefree(g: &RatPolynomial) -> Result<Vec<CertifiedRoot>> {
    let g = g.monic();
    let Some(n) = g.degree() else {
        return Err(Error::InvalidInput("zero polynomial has no isolated roots".into()));
    };
    if n == 0 {
        return Ok(Vec::new());
    }
    let coeffs = g.to_complex();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Indeterminate("coefficients exceed double range".into()));
    }
    for attempt in 0..6 {
        let z = aberth(&coeffs, 0.4 + 0.77 * attempt as f64, 500 + 500 * attempt);
        let Some(radii) = inclusion_radii(&g, &z) else {
            continue;
        };
        let roots: Vec<CertifiedRoot> = z
            .iter()
            .zip(&radii)
            .map(|(&c, &r)| CertifiedRoot {
                re: c.re,
                im: c.im,
                radius: r,
                modulus: modulus_interval(c, r),
                multiplicity: 1,
            })
            .collect();
        if roots.iter().all(|r| r.modulus.width() <= MODULUS_WIDTH) {
            return Ok(roots);
        }
    }
    Err(Error::Indeterminate(format!("root isolation did not certify for {}", g.to_string_rat())))
}

/// All roots with multiplicities, via squarefree decomposition.
pub fn isolate_roots(f: &RatPolynomial) -> Result<Vec<CertifiedRoot>> {
    let mut out = Vec::new();
    for (g, mult) in f.squarefree_decomposition() {
        for mut r in isolate_squarefree(&g)? {
            r.multiplicity = mult;
            out.push(r);
        }
    }
    Ok(out)
}

impl RatPolynomial {
    pub(crate) fn to_string_rat(&self) -> String {
        let terms: Vec<String> = self.coeffs().iter().map(|c| c.to_string()).collect();
        format!("[{}]", terms.join(", "))
    }
}
