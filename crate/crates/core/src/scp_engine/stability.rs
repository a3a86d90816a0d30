use std::collections::BTreeSet;

use serde::Serialize;

use super::classify::classify_built;
use super::spec::{BaseMeasure, BuiltGroup, ScpMeasure};
use super::verdict::{Classification, ScpVerdict};
use crate::dynamics::Params;
use crate::error::{Error, Result};
use crate::groups::{apply_rational_matrix, FiniteGroup, IntAutomorphism, SubgroupDescriptor, TorusSubgroup};
use crate::matrix::IntMatrix;
use crate::measures::AtomicMeasure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    Consistent,
    Inconsistent,
    Inconclusive,
}

/// How the second group relates to the first.
#[derive(Clone, Debug)]
pub enum StabilityTarget {
    /// `𝕋^d / K` for a finite α-invariant subgroup `K`.
    TorusQuotient(TorusSubgroup),
    /// `G / N` for a normal subgroup `N`.
    FiniteQuotient(BTreeSet<usize>),
    /// `G ↪ target` along an injective homomorphism.
    FiniteEmbedding { target: FiniteGroup, map: Vec<usize> },
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub relation: String,
    pub source: Classification,
    pub image: Classification,
    /// Image of the source subgroup when the source verdict is ShiftedHaar.
    pub expected_subgroup: Option<SubgroupDescriptor>,
    pub status: StabilityStatus,
    pub detail: String,
}

/// `B(K)` for the quotient map `x ↦ Bx`; its annihilator is `{χ : Bᵀχ ∈ Λ_K}`.
fn torus_image(k: &TorusSubgroup, b: &IntMatrix) -> Result<TorusSubgroup> {
    Ok(TorusSubgroup::from_annihilator(k.annihilator().preimage(&b.transpose())?))
}

/// The quotient map `𝕋^d → 𝕋^d/K ≅ 𝕋^d`, `x ↦ Bx` with the rows of `B`
/// a basis of the annihilator of `K`, and the induced automorphism `BAB⁻¹`.
pub fn torus_quotient(alpha: &IntAutomorphism, k: &TorusSubgroup) -> Result<(IntMatrix, IntAutomorphism)> {
    if !k.is_finite() {
        return Err(Error::InvalidInput("quotient subgroup must be finite".into()));
    }
    if !k.is_invariant(alpha)? {
        return Err(Error::NotInvariant(format!("subgroup with invariant factors {:?}", k.invariant_factors())));
    }
    let b = k.annihilator().basis_matrix();
    let br = b.to_rational();
    let binv = br.inverse().ok_or_else(|| Error::InvalidInput("annihilator basis is singular".into()))?;
    let induced = br.mul(&alpha.matrix().to_rational()).mul(&binv);
    if !induced.is_integral() {
        return Err(Error::NotInvariant("induced map is not integral".into()));
    }
    Ok((b, IntAutomorphism::new(induced.map(|x| x.to_integer()))?))
}

fn push_torus_measure(mu: &ScpMeasure, b: &IntMatrix) -> Result<ScpMeasure> {
    let ScpMeasure::Semidirect { base, levels } = mu else {
        return Err(Error::GroupMismatch("torus quotient needs a measure on ℤ ⋉ 𝕋^d".into()));
    };
    let base = match base {
        BaseMeasure::Rational(l) => BaseMeasure::Rational(l.map(|x| apply_rational_matrix(b, x))),
        BaseMeasure::Haar(k) => BaseMeasure::Haar(torus_image(k, b)?),
        BaseMeasure::Subspace(s) => BaseMeasure::Subspace(s.pushforward_matrix(b)?),
        BaseMeasure::Profile(_) => return Err(Error::GroupMismatch("product measure on a torus".into())),
    };
    Ok(ScpMeasure::Semidirect { base, levels: levels.clone() })
}

fn finite_measure(mu: &ScpMeasure) -> Result<&AtomicMeasure<usize>> {
    match mu {
        ScpMeasure::Finite(m) => Ok(m),
        _ => Err(Error::GroupMismatch("finite-group relation needs a measure on a finite group".into())),
    }
}

/// Compares the verdicts of `(G, μ)` and its image. ShiftedHaar must map to
/// ShiftedHaar on the image subgroup; a Violation downstairs forces one
/// upstairs; for embeddings the verdicts must match exactly.
fn compare(
    source: &ScpVerdict,
    image: &ScpVerdict,
    expected: Option<&SubgroupDescriptor>,
    exact: bool,
) -> (StabilityStatus, String) {
    use ScpVerdict as V;
    use StabilityStatus::*;
    match (source, image) {
        (V::Inconclusive { .. }, _) | (_, V::Inconclusive { .. }) => {
            (Inconclusive, "a verdict exhausted its budget".into())
        }
        (V::ShiftedHaar { .. }, V::ShiftedHaar { subgroup, .. }) => match expected {
            Some(e) if e == subgroup => (Consistent, "ShiftedHaar maps to ShiftedHaar on the image subgroup".into()),
            _ => (Inconsistent, format!("image subgroup {} differs from the expected one", subgroup.describe())),
        },
        (V::Dissipating { .. }, V::Dissipating { .. }) => (Consistent, "both dissipate".into()),
        (V::Violation { .. }, V::Violation { .. }) => (Consistent, "both violate".into()),
        (V::Violation { .. }, _) if !exact => (Consistent, "violation upstairs only".into()),
        (s, i) => (Inconsistent, format!("{} maps to {}", s.tag(), i.tag())),
    }
}

pub fn quotient_injection_stability(
    group: &BuiltGroup,
    target: &StabilityTarget,
    mu: &ScpMeasure,
    params: &Params,
) -> Result<StabilityReport> {
    let source = classify_built(group, mu, params)?;
    let (relation, image_group, image_mu, expected, exact) = match (group, target) {
        (BuiltGroup::Torus(alpha), StabilityTarget::TorusQuotient(k)) => {
            let (b, induced) = torus_quotient(alpha, k)?;
            let expected = match source.verdict.subgroup() {
                Some(SubgroupDescriptor::Torus(up)) => Some(SubgroupDescriptor::Torus(torus_image(up, &b)?)),
                _ => None,
            };
            let relation = format!("quotient by a finite subgroup with invariant factors {:?}", k.invariant_factors());
            (relation, BuiltGroup::Torus(induced), push_torus_measure(mu, &b)?, expected, false)
        }
        (BuiltGroup::Finite(g), StabilityTarget::FiniteQuotient(n)) => {
            let (q, map) = g.quotient(n)?;
            let expected = match source.verdict.subgroup() {
                Some(SubgroupDescriptor::Finite { elements }) => {
                    Some(SubgroupDescriptor::Finite { elements: elements.iter().map(|&x| map[x]).collect() })
                }
                _ => None,
            };
            let relation = format!("quotient of {} by a normal subgroup of order {}", g.name(), n.len());
            (relation, BuiltGroup::Finite(q), ScpMeasure::Finite(finite_measure(mu)?.map(|&x| map[x])), expected, false)
        }
        (BuiltGroup::Finite(g), StabilityTarget::FiniteEmbedding { target, map }) => {
            if !g.is_embedding(target, map) {
                return Err(Error::InvalidInput("map is not an injective homomorphism".into()));
            }
            let expected = match source.verdict.subgroup() {
                Some(SubgroupDescriptor::Finite { elements }) => {
                    Some(SubgroupDescriptor::Finite { elements: elements.iter().map(|&x| map[x]).collect() })
                }
                _ => None,
            };
            let relation = format!("embedding of {} into {}", g.name(), target.name());
            (
                relation,
                BuiltGroup::Finite(target.clone()),
                ScpMeasure::Finite(finite_measure(mu)?.map(|&x| map[x])),
                expected,
                true,
            )
        }
        _ => return Err(Error::GroupMismatch(format!("relation not supported on {}", group.describe()))),
    };
    let image = classify_built(&image_group, &image_mu, params)?;
    let (status, detail) = compare(&source.verdict, &image.verdict, expected.as_ref(), exact);
    Ok(StabilityReport { relation, source, image, expected_subgroup: expected, status, detail })
}

/// `G ↪ G × ℤ₂`, `g ↦ (g, 0)`.
pub fn product_embedding(g: &FiniteGroup) -> (FiniteGroup, Vec<usize>) {
    let target = FiniteGroup::direct_product(g, &FiniteGroup::cyclic(2));
    let map = (0..g.order()).map(|x| 2 * x).collect();
    (target, map)
}
