//! Scenario files: one TOML document per experiment.

use std::path::Path;
use std::str::FromStr;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use scp_core::dynamics::Params;
use scp_core::groups::{Lattice, RationalPoint, TorusSubgroup};
use scp_core::measures::{random_finite, AtomicMeasure};
use scp_core::scp_engine::{
    construct_counterexample, shift_counterexample, BaseMeasure, BuiltGroup, Counterexample, GroupSpec, ScpMeasure,
};
use scp_core::{Error, Result};

/// One weighted atom; `weight` is an exact rational such as `"1/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atom<T> {
    pub at: T,
    pub weight: String,
}

fn default_levels() -> Vec<i64> {
    vec![1]
}

fn default_max_atoms() -> usize {
    4
}

fn default_max_count() -> u64 {
    6
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    /// Atoms on a finite group, by element index.
    Finite {
        atoms: Vec<Atom<usize>>,
    },
    /// Seeded random measure on a finite group.
    RandomFinite {
        #[serde(default = "default_max_atoms")]
        max_atoms: usize,
        #[serde(default = "default_max_count")]
        max_count: u64,
    },
    Lattice {
        atoms: Vec<Atom<Vec<i64>>>,
    },
    /// Rational atoms on 𝕋^d (coordinates as fractions) times uniform levels.
    Rational {
        atoms: Vec<Atom<Vec<String>>>,
        #[serde(default = "default_levels")]
        levels: Vec<i64>,
    },
    /// Haar measure of the subgroup annihilated by the given characters.
    Haar {
        annihilator: Vec<Vec<i64>>,
        #[serde(default = "default_levels")]
        levels: Vec<i64>,
    },
    /// Two atoms on a contracting line of the automorphism.
    Counterexample,
    /// Haar measure of the half-line profile subgroup at level 1.
    HalfLineProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub group: GroupSpec,
    pub measure: MeasureSpec,
    #[serde(default)]
    pub params: Params,
    /// Verdict tag, optionally with the violation reason (`violation:non_idempotent_limit`).
    pub expected: Option<String>,
    pub seed: Option<u64>,
}

/// A measure built from its spec, with the constructor output when there is one.
pub struct BuiltMeasure {
    pub measure: ScpMeasure,
    pub constructed: bool,
    pub counterexample: Option<Counterexample>,
}

impl Scenario {
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let s: Self = toml::from_str(text).map_err(|e| e.to_string())?;
        if s.id.trim().is_empty() {
            return Err("empty scenario id".into());
        }
        s.params.validate().map_err(|e| e.to_string())?;
        Ok(s)
    }

    pub fn load(path: &Path) -> std::result::Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn build_measure(&self, group: &BuiltGroup, seed: u64) -> Result<BuiltMeasure> {
        let plain = |measure| Ok(BuiltMeasure { measure, constructed: false, counterexample: None });
        match (&self.measure, group) {
            (MeasureSpec::Finite { atoms }, BuiltGroup::Finite(_)) => {
                plain(ScpMeasure::Finite(weighted(atoms, |x| Ok(*x))?))
            }
            (MeasureSpec::RandomFinite { max_atoms, max_count }, BuiltGroup::Finite(g)) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                plain(ScpMeasure::Finite(random_finite(g.order(), *max_atoms, *max_count, &mut rng)))
            }
            (MeasureSpec::Lattice { atoms }, BuiltGroup::Lattice(_)) => {
                plain(ScpMeasure::Lattice(weighted(atoms, |x| Ok(x.clone()))?))
            }
            (MeasureSpec::Rational { atoms, levels }, BuiltGroup::Torus(_)) => {
                let base = weighted(atoms, |coords| {
                    let c = coords.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
                    Ok(RationalPoint::new(c))
                })?;
                plain(ScpMeasure::Semidirect { base: BaseMeasure::Rational(base), levels: uniform_levels(levels)? })
            }
            (MeasureSpec::Haar { annihilator, levels }, BuiltGroup::Torus(a)) => {
                let k = TorusSubgroup::from_annihilator(Lattice::from_generators(a.dim(), annihilator)?);
                plain(ScpMeasure::Semidirect { base: BaseMeasure::Haar(k), levels: uniform_levels(levels)? })
            }
            (MeasureSpec::Counterexample, BuiltGroup::Torus(a)) => {
                let ce = construct_counterexample(a, self.params.atom_scale)?;
                Ok(BuiltMeasure { measure: ce.measure(), constructed: true, counterexample: Some(ce) })
            }
            (MeasureSpec::HalfLineProfile, BuiltGroup::Shift(l)) => {
                Ok(BuiltMeasure { measure: shift_counterexample(l)?, constructed: true, counterexample: None })
            }
            (m, g) => Err(Error::GroupMismatch(format!("{} measure on {}", kind(m), g.describe()))),
        }
    }
}

fn kind(m: &MeasureSpec) -> &'static str {
    match m {
        MeasureSpec::Finite { .. } => "finite",
        MeasureSpec::RandomFinite { .. } => "random_finite",
        MeasureSpec::Lattice { .. } => "lattice",
        MeasureSpec::Rational { .. } => "rational",
        MeasureSpec::Haar { .. } => "haar",
        MeasureSpec::Counterexample => "counterexample",
        MeasureSpec::HalfLineProfile => "half_line_profile",
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim()).map_err(|_| Error::InvalidInput(format!("not a rational number: {s:?}")))
}

pub fn weighted<T, E: Ord + Clone>(atoms: &[Atom<T>], f: impl Fn(&T) -> Result<E>) -> Result<AtomicMeasure<E>> {
    let atoms = atoms.iter().map(|a| Ok((f(&a.at)?, parse_rational(&a.weight)?))).collect::<Result<Vec<_>>>()?;
    AtomicMeasure::from_weights(atoms)
}

fn uniform_levels(levels: &[i64]) -> Result<AtomicMeasure<i64>> {
    AtomicMeasure::uniform(levels.iter().copied())
}
