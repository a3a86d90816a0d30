//! Probability measures: exact atomic measures on any group, lazy spectral
//! measures on tori, measures carried by an invariant subspace of a torus, and
//! product measures on shift spaces.

mod atomic;
mod profile;
mod spectral;
mod subspace;

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use atomic::{generated_subgroup, is_subgroup_set, random_finite, AtomicMeasure};
pub use profile::ProfileMeasure;
pub(crate) use spectral::transpose_apply;
pub use spectral::{window, Provenance, SpectralMeasure, DEFAULT_WINDOW};
pub use subspace::SubspaceMeasure;

use crate::error::Result;
use crate::groups::{FiniteGroup, Group, SubgroupDescriptor};

/// Default tolerance for idempotence detection.
pub const IDEMPOTENT_TOL: f64 = 1e-6;

/// A measure in one of the supported representations.
#[derive(Clone, Debug)]
pub enum Measure {
    Finite(AtomicMeasure<usize>),
    Lattice(AtomicMeasure<Vec<i64>>),
    Spectral(SpectralMeasure),
    Profile(ProfileMeasure),
}

/// Normalized Haar measure of a compact subgroup.
pub fn haar_of(sub: &SubgroupDescriptor) -> Result<Measure> {
    Ok(match sub {
        SubgroupDescriptor::Finite { elements } => Measure::Finite(AtomicMeasure::uniform(elements.iter().copied())?),
        SubgroupDescriptor::Torus(k) => Measure::Spectral(SpectralMeasure::haar(k)),
        SubgroupDescriptor::Profile { coordinates } => Measure::Profile(ProfileMeasure::haar(coordinates)?),
        SubgroupDescriptor::LatticeTrivial { dim } => Measure::Lattice(AtomicMeasure::dirac(vec![0; *dim])),
    })
}

/// Exact idempotence on a finite group: `μ·μ = μ` and `μ` is uniform on a
/// subgroup. Returns that subgroup.
pub fn finite_idempotent(group: &FiniteGroup, mu: &AtomicMeasure<usize>) -> Option<BTreeSet<usize>> {
    let support = mu.support_set();
    (mu.is_uniform() && group.is_subgroup(&support) && mu.convolve(group, mu) == *mu).then_some(support)
}

/// Closest Haar measure of a finite subgroup: `H` is the set of atoms
/// carrying at least half the largest weight. Returns `H` and the exact
/// total variation distance to `ω_H` when `H` is a subgroup.
pub fn nearest_finite_haar<G: Group>(
    group: &G,
    mu: &AtomicMeasure<G::Elem>,
) -> Option<(BTreeSet<G::Elem>, BigRational)> {
    let half_max = mu.max_weight() / BigRational::from_integer(2.into());
    let h: BTreeSet<G::Elem> = mu.atoms().filter(|(_, w)| *w >= half_max).map(|(e, _)| e.clone()).collect();
    if !is_subgroup_set(group, &h) {
        return None;
    }
    let haar = AtomicMeasure::uniform(h.iter().cloned()).ok()?;
    let d = mu.tv_distance(&haar);
    Some((h, d))
}

/// Approximate idempotence on a discrete group: the nearest finite Haar
/// measure lies within `tol` in total variation.
pub fn approx_idempotent<G: Group>(
    group: &G,
    mu: &AtomicMeasure<G::Elem>,
    tol: f64,
) -> Option<(BTreeSet<G::Elem>, f64)> {
    let (h, d) = nearest_finite_haar(group, mu)?;
    let d = d.to_f64()?;
    (d <= tol).then_some((h, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::TorusSubgroup;

    #[test]
    fn idempotents_on_finite_groups() {
        let g = FiniteGroup::cyclic(6);
        let h = AtomicMeasure::uniform([0usize, 2, 4]).unwrap();
        assert_eq!(finite_idempotent(&g, &h), Some(BTreeSet::from([0, 2, 4])));
        assert_eq!(finite_idempotent(&g, &AtomicMeasure::uniform([0usize, 1]).unwrap()), None);
        assert_eq!(finite_idempotent(&g, &AtomicMeasure::dirac(0)), Some(BTreeSet::from([0])));
    }

    #[test]
    fn haar_dispatch() {
        match haar_of(&SubgroupDescriptor::Torus(TorusSubgroup::torsion(1, 2))).unwrap() {
            Measure::Spectral(s) => assert_eq!(s.coeff(&[2]).re, 1.0),
            other => panic!("{other:?}"),
        }
        match haar_of(&SubgroupDescriptor::LatticeTrivial { dim: 2 }).unwrap() {
            Measure::Lattice(m) => assert_eq!(m, AtomicMeasure::dirac(vec![0, 0])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nearest_haar_of_almost_uniform() {
        let g = FiniteGroup::cyclic(4);
        let mu = AtomicMeasure::from_counts([(0usize, 50), (2, 49), (1, 1)]).unwrap();
        let (h, d) = nearest_finite_haar(&g, &mu).unwrap();
        assert_eq!(h, BTreeSet::from([0, 2]));
        assert_eq!(d, BigRational::new(1.into(), 100.into()));
        assert!(approx_idempotent(&g, &mu, 1e-6).is_none());
    }
}
