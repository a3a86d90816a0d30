use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::AtomicMeasure;
use crate::error::{Error, Result};
use crate::groups::{IntAutomorphism, Lattice, RationalPoint, TorusPoint, TorusSubgroup};
use crate::matrix::IntMatrix;

/// Default character window radius.
pub const DEFAULT_WINDOW: u32 = 8;

type CoeffFn = dyn Fn(&[i64]) -> Complex64 + Send + Sync;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ExactFromAtoms,
    ClosedForm,
    LimitOfProducts,
}

/// A probability measure on 𝕋^d given by its Fourier coefficients
/// `μ̂(χ) = ∫ e^{2πi χ·x} dμ(x)`, evaluated lazily and cached per character.
/// A coefficient of NaN marks a character the oracle cannot evaluate.
#[derive(Clone)]
pub struct SpectralMeasure {
    dim: usize,
    oracle: Arc<CoeffFn>,
    cache: Arc<Mutex<HashMap<Vec<i64>, Complex64>>>,
    period: Option<u64>,
    provenance: Provenance,
}

impl fmt::Debug for SpectralMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralMeasure")
            .field("dim", &self.dim)
            .field("period", &self.period)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

/// All characters with `‖χ‖∞ ≤ radius`, in lexicographic order.
pub fn window(dim: usize, radius: u32) -> Vec<Vec<i64>> {
    let r = i64::from(radius);
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (-r..=r).map(move |k| {
                    let mut v = prefix.clone();
                    v.push(k);
                    v
                })
            })
            .collect();
    }
    out
}

fn reduce(chi: &[i64], period: Option<u64>) -> Vec<i64> {
    match period {
        Some(p) => chi.iter().map(|&c| c.rem_euclid(p as i64)).collect(),
        None => chi.to_vec(),
    }
}

fn combine_periods(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    Some(a?.lcm(&b?))
}

/// `Mᵀχ`, reduced modulo `period` when given; `None` on overflow.
pub(crate) fn transpose_apply(m: &[Vec<i64>], chi: &[i64], period: Option<u64>) -> Option<Vec<i64>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            let s: i128 = m.iter().zip(chi).map(|(row, &c)| i128::from(row[j]) * i128::from(c)).sum();
            match period {
                Some(p) => Some(s.rem_euclid(i128::from(p)) as i64),
                None => i64::try_from(s).ok(),
            }
        })
        .collect()
}

impl SpectralMeasure {
    pub fn closed_form(
        dim: usize,
        period: Option<u64>,
        provenance: Provenance,
        oracle: impl Fn(&[i64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self { dim, oracle: Arc::new(oracle), cache: Arc::default(), period, provenance }
    }

    /// Measure with atoms on the 2⁻⁶⁴ grid; phases are computed exactly.
    pub fn from_points(dim: usize, mu: &AtomicMeasure<TorusPoint>) -> Result<Self> {
        if let Some(x) = mu.support().find(|x| x.dim() != dim) {
            return Err(Error::Dimension { expected: dim, got: x.dim() });
        }
        let atoms = mu.atoms_f64();
        Ok(Self::closed_form(dim, None, Provenance::ExactFromAtoms, move |chi| {
            atoms.iter().map(|(x, w)| x.character(chi) * *w).sum()
        }))
    }

    /// Measure with exact rational atoms; coefficients are periodic modulo
    /// the common denominator.
    pub fn from_rational_atoms(dim: usize, mu: &AtomicMeasure<RationalPoint>) -> Result<Self> {
        if let Some(x) = mu.support().find(|x| x.dim() != dim) {
            return Err(Error::Dimension { expected: dim, got: x.dim() });
        }
        let period =
            mu.support().map(RationalPoint::denominator).fold(num_bigint::BigInt::from(1), |a, b| a.lcm(&b)).to_u64();
        let atoms = mu.atoms_f64();
        Ok(Self::closed_form(dim, period, Provenance::ExactFromAtoms, move |chi| {
            atoms.iter().map(|(x, w)| x.character(chi) * *w).sum()
        }))
    }

    pub fn dirac(x: TorusPoint) -> Self {
        let dim = x.dim();
        Self::closed_form(dim, None, Provenance::ExactFromAtoms, move |chi| x.character(chi))
    }

    /// Haar measure of a closed subgroup: the indicator of its annihilator.
    pub fn haar(k: &TorusSubgroup) -> Self {
        let lattice = k.annihilator().clone();
        let period = lattice.exponent();
        Self::closed_form(k.dim(), period, Provenance::ClosedForm, move |chi| {
            if lattice.contains(chi) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> Option<u64> {
        self.period
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn coeff(&self, chi: &[i64]) -> Complex64 {
        assert_eq!(chi.len(), self.dim, "character dimension mismatch");
        let key = reduce(chi, self.period);
        if let Some(c) = self.cache.lock().expect("cache poisoned").get(&key) {
            return *c;
        }
        let c = (self.oracle)(&key);
        self.cache.lock().expect("cache poisoned").entry(key).or_insert(c);
        c
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::GroupMismatch(format!("𝕋^{} vs 𝕋^{}", self.dim, other.dim)));
        }
        Ok(())
    }

    /// Convolution: coefficientwise product.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let (a, b) = (self.clone(), other.clone());
        let provenance = self.provenance.max(other.provenance);
        Ok(Self::closed_form(self.dim, combine_periods(self.period, other.period), provenance, move |chi| {
            a.coeff(chi) * b.coeff(chi)
        }))
    }

    /// `μ̌`: coefficients are conjugated.
    pub fn reflect(&self) -> Self {
        let a = self.clone();
        Self::closed_form(self.dim, self.period, self.provenance, move |chi| a.coeff(chi).conj())
    }

    /// Image under the homomorphism `x ↦ M x` from 𝕋^d to 𝕋^{d'}, `M` a
    /// `d'×d` integer matrix: the new coefficient at `χ` is the old one at `Mᵀχ`.
    pub fn pushforward_matrix(&self, m: &IntMatrix) -> Result<Self> {
        if m.cols() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: m.cols() });
        }
        let rows = m.to_i64_rows()?;
        let a = self.clone();
        let period = self.period;
        Ok(Self::closed_form(m.rows(), period, self.provenance, move |chi| match transpose_apply(&rows, chi, period) {
            Some(psi) => a.coeff(&psi),
            None => Complex64::new(f64::NAN, f64::NAN),
        }))
    }

    pub fn pushforward(&self, alpha: &IntAutomorphism) -> Result<Self> {
        self.pushforward_matrix(alpha.matrix())
    }

    /// Image in 𝕋^d/K ≅ 𝕋^d for a finite subgroup K, using the quotient map
    /// `x ↦ Bx` with `B` the Hermite basis of the annihilator of K.
    pub fn quotient(&self, k: &TorusSubgroup) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Unsupported("quotient by a positive-dimensional subgroup".into()));
        }
        self.pushforward_matrix(&k.annihilator().basis_matrix())
    }

    pub fn window_coeffs(&self, radius: u32) -> Vec<(Vec<i64>, Complex64)> {
        window(self.dim, radius)
            .into_iter()
            .map(|chi| {
                let c = self.coeff(&chi);
                (chi, c)
            })
            .collect()
    }

    /// `max_{‖χ‖∞ ≤ radius} |μ̂(χ) − ν̂(χ)|`.
    pub fn distance(&self, other: &Self, radius: u32) -> Result<f64> {
        self.check_dim(other)?;
        let mut d: f64 = 0.0;
        for chi in window(self.dim, radius) {
            let diff = (self.coeff(&chi) - other.coeff(&chi)).norm();
            if diff.is_nan() {
                return Err(Error::Overflow(format!("coefficient at {chi:?} is not representable")));
            }
            d = d.max(diff);
        }
        Ok(d)
    }

    /// Necessary conditions for a probability measure, checked on the window.
    pub fn check_invariants(&self, radius: u32) -> Result<()> {
        let zero = vec![0; self.dim];
        if (self.coeff(&zero) - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidInput("total mass is not 1".into()));
        }
        for chi in window(self.dim, radius) {
            let c = self.coeff(&chi);
            let neg: Vec<i64> = chi.iter().map(|x| -x).collect();
            if (c - self.coeff(&neg).conj()).norm() > 1e-12 {
                return Err(Error::InvalidInput(format!("coefficients not Hermitian at {chi:?}")));
            }
            if c.norm() > 1.0 + 1e-12 {
                return Err(Error::InvalidInput(format!("coefficient modulus exceeds 1 at {chi:?}")));
            }
        }
        Ok(())
    }

    /// Windowed idempotence test: every coefficient within `tol` of 0 or 1
    /// and the near-1 characters closed under negation and (in-window)
    /// addition. Returns the subgroup whose annihilator they generate.
    pub fn is_idempotent(&self, radius: u32, tol: f64) -> Option<TorusSubgroup> {
        let one = Complex64::new(1.0, 0.0);
        let mut near_one = BTreeSet::new();
        for (chi, c) in self.window_coeffs(radius) {
            if (c - one).norm() <= tol {
                near_one.insert(chi);
            } else if c.norm() > tol || c.is_nan() {
                return None;
            }
        }
        let r = i64::from(radius);
        for a in &near_one {
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            if !near_one.contains(&neg) {
                return None;
            }
            for b in &near_one {
                let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if sum.iter().all(|x| x.abs() <= r) && !near_one.contains(&sum) {
                    return None;
                }
            }
        }
        let gens: Vec<Vec<i64>> = near_one.into_iter().collect();
        let lattice = Lattice::from_generators(self.dim, &gens).ok()?;
        Some(TorusSubgroup::from_annihilator(lattice))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rp(f: &[(i64, i64)]) -> RationalPoint {
        RationalPoint::from_fractions(f).unwrap()
    }

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn haar_of_half_subgroup() {
        let k = TorusSubgroup::torsion(1, 2);
        let h = SpectralMeasure::haar(&k);
        for m in -6..=6 {
            let expected = if m % 2 == 0 { 1.0 } else { 0.0 };
            assert_eq!(h.coeff(&[m]).re, expected);
        }
        assert_eq!(h.is_idempotent(4, 1e-6), Some(k));
    }

    #[test]
    fn trivial_and_full_haar() {
        let triv = SpectralMeasure::haar(&TorusSubgroup::trivial(2));
        assert!(window(2, 3).iter().all(|chi| triv.coeff(chi) == Complex64::new(1.0, 0.0)));
        let full = SpectralMeasure::haar(&TorusSubgroup::full(2));
        assert!(window(2, 3).iter().all(|chi| full.coeff(chi).re == f64::from(u8::from(chi.iter().all(|&c| c == 0)))));
    }

    #[test]
    fn distance_between_diracs() {
        let a = SpectralMeasure::dirac(TorusPoint::zero(1));
        let b = SpectralMeasure::dirac(TorusPoint::from_f64(&[0.5]));
        assert!((a.distance(&b, 1).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(a.distance(&a, 5).unwrap(), 0.0);
    }

    #[test]
    fn non_idempotent_two_atoms() {
        let mu = AtomicMeasure::from_weights([(rp(&[(0, 1)]), half()), (rp(&[(1, 3)]), half())]).unwrap();
        let s = SpectralMeasure::from_rational_atoms(1, &mu).unwrap();
        assert!((s.coeff(&[1]).norm() - 0.5).abs() < 1e-12);
        assert_eq!(s.is_idempotent(8, 1e-6), None);
    }

    #[test]
    fn quotient_drops_odd_frequencies() {
        let mu = AtomicMeasure::from_weights([(rp(&[(0, 1)]), half()), (rp(&[(1, 3)]), half())]).unwrap();
        let s = SpectralMeasure::from_rational_atoms(1, &mu).unwrap();
        let q = s.quotient(&TorusSubgroup::torsion(1, 2)).unwrap();
        for m in -4..=4 {
            assert!((q.coeff(&[m]) - s.coeff(&[2 * m])).norm() < 1e-15);
        }
    }

    #[test]
    fn pushforward_uses_transpose() {
        let alpha = IntAutomorphism::from_i64_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let x = rp(&[(1, 5), (2, 7)]);
        let s = SpectralMeasure::dirac(x.to_point());
        let p = s.pushforward(&alpha).unwrap();
        let direct = SpectralMeasure::dirac(alpha.apply_rational(&x).to_point());
        assert!(p.distance(&direct, 4).unwrap() < 1e-12);
    }

    #[test]
    fn window_size() {
        assert_eq!(window(2, 8).len(), 289);
        assert_eq!(window(1, 0), vec![vec![0]]);
    }
}
