use std::collections::BTreeSet;

use nalgebra::DVector;
use serde::Serialize;

use super::spec::{BaseMeasure, ScpMeasure};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, IntAutomorphism, Profile};
use crate::matrix::RatMatrix;
use crate::measures::{ProfileMeasure, SubspaceMeasure};
use crate::spectral_linalg::{contraction_split, distality_verdict, RootClass, SUBSPACE_RESIDUAL};

/// Largest denominator the collision guard looks for.
pub const COLLISION_DENOMINATOR: u64 = 16;

/// A two-atom measure `½δ₀ + ½δ_{t·v₋}` on a contracting line, placed at the
/// level whose conjugation contracts it.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    #[serde(skip)]
    pub base: SubspaceMeasure,
    pub level: i64,
    pub switched_to_inverse: bool,
    /// Unit contracting direction `v₋`.
    pub direction: Vec<f64>,
    pub atom_scale: f64,
    /// Atoms as points of 𝕋^d (unreduced).
    pub atoms: Vec<Vec<f64>>,
    pub contraction_rate: Option<(f64, f64)>,
    pub residual: f64,
    pub notes: Vec<String>,
}

impl Counterexample {
    pub fn measure(&self) -> ScpMeasure {
        ScpMeasure::at_level(BaseMeasure::Subspace(self.base.clone()), self.level)
    }
}

/// Smallest `q ≤ COLLISION_DENOMINATOR` with `x ∈ (1/q)ℤ^d` up to `tol`.
pub fn small_denominator(x: &[f64], tol: f64) -> Option<u64> {
    (1..=COLLISION_DENOMINATOR).find(|&q| {
        x.iter().all(|c| {
            let y = c * q as f64;
            (y - y.round()).abs() <= tol
        })
    })
}

pub fn construct_counterexample(alpha: &IntAutomorphism, atom_scale: f64) -> Result<Counterexample> {
    if distality_verdict(alpha)?.is_distal() {
        return Err(Error::NoContractingDirection);
    }
    construct_counterexample_rat(&alpha.matrix().to_rational(), atom_scale)
}

/// As [`construct_counterexample`] for an invertible rational matrix; when
/// only the inverse contracts the measure is placed at level −1.
pub fn construct_counterexample_rat(m: &RatMatrix, atom_scale: f64) -> Result<Counterexample> {
    if !(atom_scale.is_finite() && atom_scale > 0.0) {
        return Err(Error::InvalidInput(format!("atom scale must be positive, got {atom_scale}")));
    }
    let mut notes = Vec::new();
    let mut split = contraction_split(m)?;
    let mut switched = false;
    if split.contracting_dim() == 0 {
        let inv = m.inverse().ok_or_else(|| Error::InvalidInput("matrix is singular".into()))?;
        split = contraction_split(&inv)?;
        if split.contracting_dim() == 0 {
            return Err(Error::NoContractingDirection);
        }
        switched = true;
        notes.push("no contracting direction for α; using α⁻¹ at level −1".into());
    }
    if split.residual > SUBSPACE_RESIDUAL {
        return Err(Error::Indeterminate(format!("contracting subspace residual {:e}", split.residual)));
    }
    let basis = split.basis(RootClass::Contracting).clone();
    let k = basis.ncols();
    let mut v: Vec<f64> = basis.column(0).iter().copied().collect();
    let sign = match v.iter().find(|x| x.abs() > 1e-12) {
        Some(x) if *x < 0.0 => -1.0,
        _ => 1.0,
    };
    v.iter_mut().for_each(|x| *x *= sign);

    let mut t = atom_scale;
    for _ in 0..16 {
        let point: Vec<f64> = v.iter().map(|x| (t * x).rem_euclid(1.0)).collect();
        match small_denominator(&point, 1e-9) {
            Some(q) => {
                let next = t * 0.754_877_666_246_692_7;
                notes.push(format!("t = {t} puts the atom on the 1/{q} grid; rescaled to {next}"));
                t = next;
            }
            None => break,
        }
    }
    let mut s = DVector::zeros(k);
    s[0] = sign * t;
    let atoms = vec![(DVector::zeros(k), 0.5), (s, 0.5)];
    let base = SubspaceMeasure::new(basis, split.restricted(RootClass::Contracting), atoms)?;
    Ok(Counterexample {
        atoms: base.atoms().iter().map(|(s, _)| base.point(s)).collect(),
        base,
        level: if switched { -1 } else { 1 },
        switched_to_inverse: switched,
        direction: v,
        atom_scale: t,
        contraction_rate: split.contraction_rate().map(|r| (r.lo, r.hi)),
        residual: split.residual,
        notes,
    })
}

/// The profile subgroup `M = ∏_{i ≤ 0} L × ∏_{i > 0} {e}`.
pub fn half_line_subgroup(symbols: &FiniteGroup) -> Profile<BTreeSet<usize>> {
    Profile::step(1, symbols.elements().collect(), BTreeSet::from([symbols.identity_index()]))
}

/// `ω_M δ_{(e,1)}` on `ℤ ⋉ L^ℤ`: its shifted powers are constant and `τ(M) ≠ M`
/// unless `L` is trivial.
pub fn shift_counterexample(symbols: &FiniteGroup) -> Result<ScpMeasure> {
    let omega = ProfileMeasure::haar(&half_line_subgroup(symbols))?;
    Ok(ScpMeasure::at_level(BaseMeasure::Profile(omega), 1))
}
