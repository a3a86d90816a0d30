use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::RationalPoint;
use crate::groups::{FiniteGroup, IntAutomorphism, LatticeGroup, TorusSubgroup};
use crate::measures::{AtomicMeasure, ProfileMeasure, SubspaceMeasure};

/// Largest finite group order accepted from a spec.
pub const MAX_FINITE_ORDER: usize = 5040;

/// A finite group by name or by multiplication table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiniteGroupSpec {
    Cyclic {
        n: usize,
    },
    /// The dihedral group of order `2n`.
    Dihedral {
        n: usize,
    },
    Symmetric {
        n: usize,
    },
    Alternating {
        n: usize,
    },
    Quaternion,
    Product {
        factors: Vec<FiniteGroupSpec>,
    },
    /// Cayley table on `0..n` with identity `0`.
    Table {
        name: String,
        table: Vec<Vec<usize>>,
    },
}

impl FiniteGroupSpec {
    pub fn build(&self) -> Result<FiniteGroup> {
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        let g = match self {
            Self::Cyclic { n } if *n >= 1 => FiniteGroup::cyclic(*n),
            Self::Cyclic { n } => return bad(format!("cyclic group of order {n}")),
            Self::Dihedral { n } if *n >= 3 => FiniteGroup::dihedral(*n),
            Self::Dihedral { n } => return bad(format!("dihedral group needs n ≥ 3, got {n}")),
            Self::Symmetric { n } if (1..=7).contains(n) => FiniteGroup::symmetric(*n),
            Self::Symmetric { n } => return bad(format!("symmetric group S{n} unsupported (1 ≤ n ≤ 7)")),
            Self::Alternating { n } if (3..=7).contains(n) => FiniteGroup::alternating(*n),
            Self::Alternating { n } => return bad(format!("alternating group A{n} unsupported (3 ≤ n ≤ 7)")),
            Self::Quaternion => FiniteGroup::quaternion(),
            Self::Product { factors } => {
                let mut it = factors.iter();
                let first = it.next().ok_or_else(|| Error::InvalidGroup("empty product".into()))?.build()?;
                it.try_fold(first, |acc, f| -> Result<FiniteGroup> {
                    let b = f.build()?;
                    if acc.order() * b.order() > MAX_FINITE_ORDER {
                        return Err(Error::InvalidGroup("product too large".into()));
                    }
                    Ok(FiniteGroup::direct_product(&acc, &b))
                })?
            }
            Self::Table { name, table } => FiniteGroup::from_table(name.clone(), table.clone())?,
        };
        if g.order() > MAX_FINITE_ORDER {
            return bad(format!("order {} exceeds {MAX_FINITE_ORDER}", g.order()));
        }
        Ok(g)
    }
}

/// One of the supported group families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Finite {
        group: FiniteGroupSpec,
    },
    /// ℤ^d.
    Lattice {
        dim: usize,
    },
    /// ℤ ⋉_A 𝕋^d for a unimodular integer matrix `A`.
    TorusSemidirect {
        matrix: Vec<Vec<i64>>,
    },
    /// ℤ ⋉_τ L^ℤ with the left shift τ.
    ShiftSemidirect {
        symbols: FiniteGroupSpec,
    },
}

/// A group spec with its structures built.
#[derive(Clone, Debug)]
pub enum BuiltGroup {
    Finite(FiniteGroup),
    Lattice(LatticeGroup),
    Torus(IntAutomorphism),
    Shift(FiniteGroup),
}

impl GroupSpec {
    pub fn build(&self) -> Result<BuiltGroup> {
        Ok(match self {
            Self::Finite { group } => BuiltGroup::Finite(group.build()?),
            Self::Lattice { dim } if (1..=4).contains(dim) => BuiltGroup::Lattice(LatticeGroup { dim: *dim }),
            Self::Lattice { dim } => {
                return Err(Error::InvalidGroup(format!("lattice dimension {dim} unsupported (1..=4)")))
            }
            Self::TorusSemidirect { matrix } => BuiltGroup::Torus(IntAutomorphism::from_i64_rows(matrix)?),
            Self::ShiftSemidirect { symbols } => BuiltGroup::Shift(symbols.build()?),
        })
    }

    pub fn describe(&self) -> String {
        match self.build() {
            Ok(g) => g.describe(),
            Err(e) => format!("invalid group: {e}"),
        }
    }
}

impl BuiltGroup {
    pub fn describe(&self) -> String {
        match self {
            Self::Finite(g) => format!("finite group {} of order {}", g.name(), g.order()),
            Self::Lattice(l) => format!("ℤ^{}", l.dim),
            Self::Torus(a) => {
                format!("ℤ ⋉_A 𝕋^{} with A = {:?}", a.dim(), a.matrix().to_i64_rows().unwrap_or_default())
            }
            Self::Shift(l) => format!("ℤ ⋉_τ L^ℤ with L = {}", l.name()),
        }
    }
}

/// The base part `λ′` of a measure `μ = λ′ · ν` on `ℤ ⋉ B`, where `ν` is a
/// measure on the ℤ-levels `δ_{(e,m)}`.
#[derive(Clone, Debug)]
pub enum BaseMeasure {
    /// Exact rational atoms on 𝕋^d.
    Rational(AtomicMeasure<RationalPoint>),
    /// Haar measure of a closed subgroup of 𝕋^d.
    Haar(TorusSubgroup),
    /// Atoms carried by an invariant subspace of 𝕋^d.
    Subspace(SubspaceMeasure),
    /// Product measure on L^ℤ.
    Profile(ProfileMeasure),
}

/// A probability measure on one of the supported groups.
#[derive(Clone, Debug)]
pub enum ScpMeasure {
    Finite(AtomicMeasure<usize>),
    Lattice(AtomicMeasure<Vec<i64>>),
    Semidirect { base: BaseMeasure, levels: AtomicMeasure<i64> },
}

impl ScpMeasure {
    /// `λ′ · δ_{(e,m)}`.
    pub fn at_level(base: BaseMeasure, m: i64) -> Self {
        Self::Semidirect { base, levels: AtomicMeasure::dirac(m) }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Finite(mu) => format!("{} atoms on a finite group", mu.len()),
            Self::Lattice(mu) => format!("{} atoms on a lattice", mu.len()),
            Self::Semidirect { base, levels } => {
                let b = match base {
                    BaseMeasure::Rational(l) => format!("{} rational atoms", l.len()),
                    BaseMeasure::Haar(k) => {
                        format!("Haar measure of a subgroup with invariant factors {:?}", k.invariant_factors())
                    }
                    BaseMeasure::Subspace(s) => {
                        format!("{} atoms on a {}-dimensional invariant subspace", s.atoms().len(), s.basis().ncols())
                    }
                    BaseMeasure::Profile(_) => "product measure".to_string(),
                };
                let lv: Vec<String> = levels.support().map(i64::to_string).collect();
                format!("{b} at ℤ-levels {{{}}}", lv.join(", "))
            }
        }
    }
}
