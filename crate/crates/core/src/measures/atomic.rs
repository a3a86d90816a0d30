use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::groups::{Automorphism, Group};

/// A finitely supported probability measure with exact rational weights,
/// stored as numerators over one common denominator in lowest terms. The
/// representation is canonical, so structural equality is measure equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomicMeasure<E: Ord> {
    numerators: BTreeMap<E, BigUint>,
    denominator: BigUint,
}

impl<E: Ord + Clone> AtomicMeasure<E> {
    fn from_parts(mut numerators: BTreeMap<E, BigUint>, denominator: BigUint) -> Self {
        numerators.retain(|_, w| !w.is_zero());
        let g = numerators.values().fold(denominator.clone(), |g, w| g.gcd(w));
        if !g.is_one() {
            for w in numerators.values_mut() {
                *w /= &g;
            }
            let denominator = denominator / &g;
            return Self { numerators, denominator };
        }
        Self { numerators, denominator }
    }

    pub fn dirac(x: E) -> Self {
        Self { numerators: BTreeMap::from([(x, BigUint::one())]), denominator: BigUint::one() }
    }

    /// Uniform measure on the given (deduplicated, nonempty) set.
    pub fn uniform(points: impl IntoIterator<Item = E>) -> Result<Self> {
        let set: BTreeSet<E> = points.into_iter().collect();
        if set.is_empty() {
            return Err(Error::InvalidInput("uniform measure on an empty set".into()));
        }
        let n = BigUint::from(set.len());
        Ok(Self::from_parts(set.into_iter().map(|e| (e, BigUint::one())).collect(), n))
    }

    /// Builds a measure from weighted atoms; repeated atoms are merged.
    /// Weights must be nonnegative and sum to exactly one.
    pub fn from_weights(atoms: impl IntoIterator<Item = (E, BigRational)>) -> Result<Self> {
        let atoms: Vec<(E, BigRational)> = atoms.into_iter().collect();
        if atoms.iter().any(|(_, w)| w.is_negative()) {
            return Err(Error::InvalidInput("negative weight".into()));
        }
        let total: BigRational = atoms.iter().map(|(_, w)| w.clone()).sum();
        if !total.is_one() {
            return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        let denom = atoms.iter().fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
        let mut numerators: BTreeMap<E, BigUint> = BTreeMap::new();
        for (e, w) in atoms {
            let n = (w.numer() * (&denom / w.denom())).to_biguint().expect("nonnegative");
            *numerators.entry(e).or_default() += n;
        }
        Ok(Self::from_parts(numerators, denom.to_biguint().expect("positive")))
    }

    /// Weights given as integers relative to their sum.
    pub fn from_counts(atoms: impl IntoIterator<Item = (E, u64)>) -> Result<Self> {
        let mut numerators: BTreeMap<E, BigUint> = BTreeMap::new();
        for (e, c) in atoms {
            *numerators.entry(e).or_default() += BigUint::from(c);
        }
        let total: BigUint = numerators.values().sum();
        if total.is_zero() {
            return Err(Error::InvalidInput("all weights are zero".into()));
        }
        Ok(Self::from_parts(numerators, total))
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn support(&self) -> impl Iterator<Item = &E> {
        self.numerators.keys()
    }

    pub fn support_set(&self) -> BTreeSet<E> {
        self.numerators.keys().cloned().collect()
    }

    pub fn contains(&self, x: &E) -> bool {
        self.numerators.contains_key(x)
    }

    /// Numerators over the common [`denominator`](Self::denominator).
    pub fn numerators(&self) -> &BTreeMap<E, BigUint> {
        &self.numerators
    }

    pub fn weight(&self, x: &E) -> BigRational {
        self.numerators.get(x).map_or_else(BigRational::zero, |n| self.ratio(n))
    }

    pub fn weight_f64(&self, x: &E) -> f64 {
        self.weight(x).to_f64().unwrap_or(0.0)
    }

    fn ratio(&self, n: &BigUint) -> BigRational {
        BigRational::new(BigInt::from(n.clone()), BigInt::from(self.denominator.clone()))
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&E, BigRational)> + '_ {
        self.numerators.iter().map(|(e, n)| (e, self.ratio(n)))
    }

    pub fn atoms_f64(&self) -> Vec<(E, f64)> {
        self.atoms().map(|(e, w)| (e.clone(), w.to_f64().unwrap_or(0.0))).collect()
    }

    /// Mass of a set.
    pub fn mass<'a>(&self, set: impl IntoIterator<Item = &'a E>) -> BigRational
    where
        E: 'a,
    {
        let n: BigUint = set.into_iter().filter_map(|e| self.numerators.get(e)).sum();
        self.ratio(&n)
    }

    /// Pushforward along an arbitrary map; colliding atoms are merged.
    pub fn map<F: Ord + Clone>(&self, f: impl Fn(&E) -> F) -> AtomicMeasure<F> {
        let mut out: BTreeMap<F, BigUint> = BTreeMap::new();
        for (e, n) in &self.numerators {
            *out.entry(f(e)).or_default() += n;
        }
        AtomicMeasure::from_parts(out, self.denominator.clone())
    }

    pub fn convolve<G: Group<Elem = E>>(&self, group: &G, other: &Self) -> Self {
        let mut out: BTreeMap<E, BigUint> = BTreeMap::new();
        for (a, wa) in &self.numerators {
            for (b, wb) in &other.numerators {
                *out.entry(group.op(a, b)).or_default() += wa * wb;
            }
        }
        Self::from_parts(out, &self.denominator * &other.denominator)
    }

    /// `μ̌(E) = μ(E⁻¹)`.
    pub fn reflect<G: Group<Elem = E>>(&self, group: &G) -> Self {
        self.map(|x| group.inverse(x))
    }

    pub fn translate_right<G: Group<Elem = E>>(&self, group: &G, x: &E) -> Self {
        self.map(|a| group.op(a, x))
    }

    pub fn translate_left<G: Group<Elem = E>>(&self, group: &G, x: &E) -> Self {
        self.map(|a| group.op(x, a))
    }

    pub fn pushforward<G: Group<Elem = E>, A: Automorphism<G>>(&self, group: &G, alpha: &A, n: i64) -> Self {
        self.map(|x| alpha.apply_pow(group, x, n))
    }

    pub fn power<G: Group<Elem = E>>(&self, group: &G, n: usize) -> Self {
        (0..n).fold(Self::dirac(group.identity()), |acc, _| acc.convolve(group, self))
    }

    /// Total variation distance `½ Σ |μ(x) − ν(x)|`, exactly.
    pub fn tv_distance(&self, other: &Self) -> BigRational {
        let (da, db) = (&self.denominator, &other.denominator);
        let zero = BigUint::zero();
        let mut total = BigUint::zero();
        let keys: BTreeSet<&E> = self.numerators.keys().chain(other.numerators.keys()).collect();
        for k in keys {
            let a = self.numerators.get(k).unwrap_or(&zero) * db;
            let b = other.numerators.get(k).unwrap_or(&zero) * da;
            total += if a >= b { a - b } else { b - a };
        }
        BigRational::new(BigInt::from(total), BigInt::from(da * db * 2u32))
    }

    pub fn tv_distance_f64(&self, other: &Self) -> f64 {
        self.tv_distance(other).to_f64().unwrap_or(f64::NAN)
    }

    /// Whether the measure is uniform on its support.
    pub fn is_uniform(&self) -> bool {
        let mut it = self.numerators.values();
        match it.next() {
            Some(first) => it.all(|w| w == first),
            None => false,
        }
    }

    pub fn max_weight(&self) -> BigRational {
        self.numerators.values().max().map_or_else(BigRational::zero, |n| self.ratio(n))
    }

    /// Smallest subgroup containing the support.
    pub fn generated_subgroup<G: Group<Elem = E>>(&self, group: &G, limit: usize) -> Result<BTreeSet<E>> {
        generated_subgroup(group, self.support().cloned(), limit)
    }
}

/// Random measure on `0..order` with between 1 and `max_atoms` atoms and
/// integer weights in `1..=max_count`.
pub fn random_finite<R: Rng + ?Sized>(
    order: usize,
    max_atoms: usize,
    max_count: u64,
    rng: &mut R,
) -> AtomicMeasure<usize> {
    let atoms = rng.gen_range(1..=max_atoms.max(1));
    let counts: Vec<(usize, u64)> =
        (0..atoms).map(|_| (rng.gen_range(0..order), rng.gen_range(1..=max_count))).collect();
    AtomicMeasure::from_counts(counts).expect("positive counts")
}

/// Closure of a generating set under the group law (finite result expected).
pub fn generated_subgroup<G: Group>(
    group: &G,
    gens: impl IntoIterator<Item = G::Elem>,
    limit: usize,
) -> Result<BTreeSet<G::Elem>> {
    let gens: Vec<G::Elem> = gens.into_iter().collect();
    let mut set: BTreeSet<G::Elem> = BTreeSet::from([group.identity()]);
    let mut frontier: Vec<G::Elem> = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            for y in [group.op(&x, g), group.op(&x, &group.inverse(g))] {
                if set.insert(y.clone()) {
                    if set.len() > limit {
                        return Err(Error::Unsupported(format!("generated subgroup exceeds {limit} elements")));
                    }
                    frontier.push(y);
                }
            }
        }
    }
    Ok(set)
}

/// Whether a finite set is closed under the group law and inversion.
pub fn is_subgroup_set<G: Group>(group: &G, set: &BTreeSet<G::Elem>) -> bool {
    set.contains(&group.identity())
        && set.iter().all(|a| set.contains(&group.inverse(a)) && set.iter().all(|b| set.contains(&group.op(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{FiniteGroup, LatticeGroup};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn binomial_convolution_on_z() {
        let z = LatticeGroup { dim: 1 };
        let mu = AtomicMeasure::from_weights([(vec![0], q(1, 2)), (vec![1], q(1, 2))]).unwrap();
        let sq = mu.convolve(&z, &mu);
        let expected =
            AtomicMeasure::from_weights([(vec![0], q(1, 4)), (vec![1], q(1, 2)), (vec![2], q(1, 4))]).unwrap();
        assert_eq!(sq, expected);
        let four = mu.power(&z, 4);
        for (k, c) in [1, 4, 6, 4, 1].iter().enumerate() {
            assert_eq!(four.weight(&vec![k as i64]), q(*c, 16));
        }
    }

    #[test]
    fn haar_on_z2_is_idempotent() {
        let z2 = FiniteGroup::cyclic(2);
        let u = AtomicMeasure::uniform([0usize, 1]).unwrap();
        assert_eq!(u.convolve(&z2, &u), u);
        assert_eq!(u.tv_distance(&AtomicMeasure::dirac(0)), q(1, 2));
    }

    #[test]
    fn canonical_form() {
        let a = AtomicMeasure::from_counts([(1u8, 2), (2, 2)]).unwrap();
        let b = AtomicMeasure::from_weights([(2u8, q(1, 2)), (1, q(1, 2))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.denominator(), &BigUint::from(2u8));
    }

    #[test]
    fn rejects_bad_weights() {
        assert!(AtomicMeasure::from_weights([(0u8, q(1, 3))]).is_err());
        assert!(AtomicMeasure::from_weights([(0u8, q(3, 2)), (1, q(-1, 2))]).is_err());
    }

    #[test]
    fn reflection_of_dirac() {
        let g = FiniteGroup::cyclic(5);
        assert_eq!(AtomicMeasure::dirac(2usize).reflect(&g), AtomicMeasure::dirac(3));
    }

    #[test]
    fn subgroup_closure() {
        let g = FiniteGroup::cyclic(12);
        let mu = AtomicMeasure::uniform([0usize, 4]).unwrap();
        assert_eq!(mu.generated_subgroup(&g, 100).unwrap(), BTreeSet::from([0, 4, 8]));
        assert!(is_subgroup_set(&g, &BTreeSet::from([0, 4, 8])));
        assert!(!is_subgroup_set(&g, &BTreeSet::from([0, 4])));
    }
}
