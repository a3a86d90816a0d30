use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::AtomicMeasure;
use crate::error::{Error, Result};
use crate::groups::{shift_apply, FiniteGroup, Group, Profile};

/// A product measure on L^ℤ: one probability measure on the symbol group
/// per coordinate, constant on each tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProfileMeasure {
    coords: Profile<AtomicMeasure<usize>>,
}

impl ProfileMeasure {
    pub fn new(symbols: &FiniteGroup, coords: Profile<AtomicMeasure<usize>>) -> Result<Self> {
        if !coords.all(|m| m.support().all(|&x| x < symbols.order())) {
            return Err(Error::InvalidInput("profile coordinate supported outside the symbol group".into()));
        }
        Ok(Self { coords })
    }

    pub fn dirac(point: &Profile<usize>) -> Self {
        Self { coords: point.map(|&x| AtomicMeasure::dirac(x)) }
    }

    /// Haar measure of a product subgroup: uniform on each coordinate subgroup.
    pub fn haar(subgroup: &Profile<BTreeSet<usize>>) -> Result<Self> {
        if !subgroup.all(|s| !s.is_empty()) {
            return Err(Error::InvalidInput("empty coordinate subgroup".into()));
        }
        let coords = subgroup.map(|s| AtomicMeasure::uniform(s.iter().copied()).expect("nonempty"));
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &Profile<AtomicMeasure<usize>> {
        &self.coords
    }

    pub fn convolve(&self, symbols: &FiniteGroup, other: &Self) -> Self {
        Self { coords: self.coords.zip_with(&other.coords, |a, b| a.convolve(symbols, b)) }
    }

    pub fn reflect(&self, symbols: &FiniteGroup) -> Self {
        Self { coords: self.coords.map(|a| a.reflect(symbols)) }
    }

    /// Image under τᵏ.
    pub fn shift(&self, k: i64) -> Self {
        Self { coords: shift_apply(&self.coords, k) }
    }

    /// `μ · δ_g` for an eventually constant point `g`.
    pub fn translate_right(&self, symbols: &FiniteGroup, g: &Profile<usize>) -> Self {
        Self { coords: self.coords.zip_with(g, |a, x| a.translate_right(symbols, x)) }
    }

    /// Image under coordinatewise conjugation `y ↦ gᵢ y gᵢ⁻¹`.
    pub fn conjugate(&self, symbols: &FiniteGroup, g: &Profile<usize>) -> Self {
        Self { coords: self.coords.zip_with(g, |a, &x| a.map(|y| symbols.conjugate(x, *y))) }
    }

    /// Exact idempotence: every coordinate is uniform on a subgroup.
    pub fn is_idempotent(&self, symbols: &FiniteGroup) -> Option<Profile<BTreeSet<usize>>> {
        let ok = self.coords.all(|m| m.is_uniform() && symbols.is_subgroup(&m.support_set()));
        ok.then(|| self.coords.map(AtomicMeasure::support_set))
    }

    /// Largest coordinatewise total variation distance.
    pub fn distance(&self, other: &Self) -> f64 {
        let d = self.coords.zip_with(&other.coords, |a, b| a.tv_distance(b));
        let mut worst = d.left().max(d.right()).clone();
        for x in d.explicit() {
            if *x > worst {
                worst = x.clone();
            }
        }
        worst.to_f64().unwrap_or(f64::NAN)
    }

    /// Identity of the symbol group at every coordinate (the unit δ_e).
    pub fn unit(symbols: &FiniteGroup) -> Self {
        Self::dirac(&Profile::constant(symbols.identity()))
    }
}
