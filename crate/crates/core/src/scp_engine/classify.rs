use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::spec::{BaseMeasure, BuiltGroup, GroupSpec, ScpMeasure};
use super::verdict::{
    BudgetRecord, CandidateOutcome, CandidateRecord, Classification, ConcentrationRecord, DissipationEvidence,
    LimitSummary, ScpVerdict, SymmetrizedRecord, TrackedCoeff, TrajectoryExport, ViolationReason,
};
use crate::dynamics::{
    concentration_function, detect_convergence, shifted_sequence, shifted_sequence_profile,
    shifted_sequence_semidirect, shifted_sequence_spectral, shifted_sequence_subspace, symmetrize_profile,
    symmetrized_sequence, Params, Snapshot, Trajectory, WindowSnapshot,
};
use crate::error::{Error, Result};
use crate::groups::{
    shift_apply, FiniteGroup, Group, IntAutomorphism, Lattice, LatticeGroup, Profile, RationalPoint, RationalTorus,
    SubgroupDescriptor, TorusPoint, TorusSubgroup,
};
use crate::measures::{nearest_finite_haar, AtomicMeasure, ProfileMeasure, SpectralMeasure, SubspaceMeasure};

/// Steps used for concentration evidence.
const CONCENTRATION_STEPS: usize = 16;
/// Work bound (support × |K|²) above which a concentration record is skipped.
const CONCENTRATION_BUDGET: usize = 20_000_000;

/// Runs the SCP pipeline: dissipation screen, shifted sequences for every
/// support candidate, idempotence of the limits and the normalization check.
pub fn classify_measure(group: &GroupSpec, mu: &ScpMeasure, params: &Params) -> Result<Classification> {
    classify_built(&group.build()?, mu, params)
}

pub fn classify_built(group: &BuiltGroup, mu: &ScpMeasure, params: &Params) -> Result<Classification> {
    params.validate()?;
    match (group, mu) {
        (BuiltGroup::Finite(g), ScpMeasure::Finite(m)) => classify_finite(g, m, params),
        (BuiltGroup::Lattice(l), ScpMeasure::Lattice(m)) => classify_lattice(l, m, params),
        (BuiltGroup::Torus(a), ScpMeasure::Semidirect { base, levels }) => {
            if let Some(c) = level_screen(levels, params)? {
                return Ok(c);
            }
            let m = *levels.support().next().expect("nonempty");
            match base {
                BaseMeasure::Rational(l) => classify_torus_rational(a, l, m, params),
                BaseMeasure::Haar(k) => classify_torus_haar(a, k, m, params),
                BaseMeasure::Subspace(s) => classify_torus_subspace(a, s, m, params),
                BaseMeasure::Profile(_) => {
                    Err(Error::GroupMismatch("product measure on a torus semidirect product".into()))
                }
            }
        }
        (BuiltGroup::Shift(l), ScpMeasure::Semidirect { base: BaseMeasure::Profile(p), levels }) => {
            if let Some(c) = level_screen(levels, params)? {
                return Ok(c);
            }
            let m = *levels.support().next().expect("nonempty");
            classify_shift(l, p, m, params)
        }
        (g, _) => Err(Error::GroupMismatch(format!("measure representation not supported on {}", g.describe()))),
    }
}

fn export<S: Snapshot>(name: String, t: &Trajectory<S>) -> TrajectoryExport {
    let mut buf = Vec::new();
    t.write_csv(&mut buf, None).expect("writing to memory");
    TrajectoryExport { name, csv: String::from_utf8(buf).expect("csv is ascii") }
}

fn rational_string(x: &BigRational) -> String {
    x.to_string()
}

fn record(set: String, n: usize, value: &BigRational) -> ConcentrationRecord {
    ConcentrationRecord { set, n, value: rational_string(value), value_f64: value.to_f64().unwrap_or(f64::NAN) }
}

fn atomic_summary<G: Group>(group: &G, mu: &AtomicMeasure<G::Elem>, step: usize) -> LimitSummary {
    let mut atoms: Vec<(String, f64)> = mu.atoms_f64().into_iter().map(|(e, w)| (group.label(&e), w)).collect();
    atoms.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    atoms.truncate(32);
    LimitSummary::Atomic { step, support_size: mu.len(), atoms }
}

fn window_summary(s: &WindowSnapshot, step: usize, radius: u32) -> LimitSummary {
    let tracked = s
        .tracked()
        .into_iter()
        .map(|chi| {
            let c = s.coeff(&chi).expect("tracked");
            TrackedCoeff { character: chi, re: c.re, im: c.im, modulus: c.norm() }
        })
        .collect();
    LimitSummary::Window { step, radius, tracked }
}

fn combine(candidates: &[CandidateRecord], params: &Params) -> ScpVerdict {
    let haar = |want: bool| {
        candidates.iter().find_map(|c| match &c.outcome {
            CandidateOutcome::ShiftedHaar { subgroup, residual, normalization_ok, witness }
                if *normalization_ok == want =>
            {
                Some((c, subgroup, *residual, witness))
            }
            _ => None,
        })
    };
    if let Some((c, subgroup, residual, _)) = haar(true) {
        return ScpVerdict::ShiftedHaar {
            shift: c.shift.clone(),
            subgroup: subgroup.clone(),
            description: subgroup.describe(),
            residual,
            normalization_ok: true,
        };
    }
    if let Some((c, subgroup, _, witness)) = haar(false) {
        return ScpVerdict::Violation {
            shift: c.shift.clone(),
            reason: ViolationReason::LimitNotNormalizedByShift {
                subgroup: subgroup.clone(),
                witness: witness.clone().unwrap_or_default(),
            },
            limit: c.limit.clone().expect("converged candidate has a limit"),
        };
    }
    for c in candidates {
        if let CandidateOutcome::NonIdempotent { witness, character, modulus } = &c.outcome {
            return ScpVerdict::Violation {
                shift: c.shift.clone(),
                reason: ViolationReason::NonIdempotentLimit {
                    witness: witness.clone(),
                    character: character.clone(),
                    modulus: *modulus,
                },
                limit: c.limit.clone().expect("converged candidate has a limit"),
            };
        }
    }
    ScpVerdict::Inconclusive {
        budget: BudgetRecord {
            n_max: params.n_max,
            runs: candidates.iter().map(|c| (c.shift.clone(), c.convergence.clone())).collect(),
        },
    }
}

fn finish(
    candidates: Vec<CandidateRecord>,
    trajectories: Vec<TrajectoryExport>,
    symmetrized: Option<SymmetrizedRecord>,
    mut warnings: Vec<String>,
    params: &Params,
) -> Classification {
    for c in &candidates {
        warnings.extend(c.warnings.iter().map(|w| format!("{}: {w}", c.shift)));
    }
    Classification {
        verdict: combine(&candidates, params),
        params: params.clone(),
        candidates,
        symmetrized,
        warnings,
        trajectories,
    }
}

/// Idempotence on a character window: coefficients within `tol` of 0 or 1,
/// near-1 characters closed under negation and in-window sums. On failure
/// returns the character whose coefficient is farthest from {0, 1}.
pub fn window_idempotent(
    s: &WindowSnapshot,
    radius: u32,
    tol: f64,
) -> std::result::Result<TorusSubgroup, (Vec<i64>, Complex64)> {
    let one = Complex64::new(1.0, 0.0);
    let mut near_one = BTreeSet::new();
    let mut worst: Option<(Vec<i64>, Complex64, f64)> = None;
    for (chi, &c) in s.iter() {
        let score = c.norm().min((c - one).norm());
        if (c - one).norm() <= tol {
            near_one.insert(chi.clone());
        } else if (c.norm() > tol || c.is_nan()) && worst.as_ref().is_none_or(|w| score > w.2 || score.is_nan()) {
            worst = Some((chi.clone(), c, score));
        }
    }
    if let Some((chi, c, _)) = worst {
        return Err((chi, c));
    }
    let r = i64::from(radius);
    for a in &near_one {
        for b in &near_one {
            let sum: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            let neg: Vec<i64> = a.iter().map(|x| -x).collect();
            for v in [sum, neg] {
                if v.iter().all(|x| x.abs() <= r) && !near_one.contains(&v) {
                    let c = s.coeff(&v).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
                    return Err((v, c));
                }
            }
        }
    }
    let dim = s.chars().first().map_or(0, Vec::len);
    let gens: Vec<Vec<i64>> = near_one.into_iter().collect();
    let lattice = Lattice::from_generators(dim, &gens).map_err(|_| (vec![0; dim], Complex64::new(f64::NAN, 0.0)))?;
    Ok(TorusSubgroup::from_annihilator(lattice))
}

fn window_residual(s: &WindowSnapshot, k: &TorusSubgroup) -> f64 {
    let haar = SpectralMeasure::haar(k);
    s.iter().map(|(chi, c)| (c - haar.coeff(chi)).norm()).fold(0.0, f64::max)
}

fn torus_normalization(k: &TorusSubgroup, alpha_m: &IntAutomorphism) -> Result<(bool, Option<String>)> {
    let img = k.image(alpha_m)?;
    if img == *k {
        return Ok((true, None));
    }
    let (lk, li) = (k.annihilator(), img.annihilator());
    let w = lk
        .basis()
        .iter()
        .find(|chi| !li.contains(chi))
        .map(|chi| format!("character {chi:?} annihilates K but not xKx⁻¹"))
        .or_else(|| {
            li.basis()
                .iter()
                .find(|chi| !lk.contains(chi))
                .map(|chi| format!("character {chi:?} annihilates xKx⁻¹ but not K"))
        });
    Ok((false, w))
}

fn window_outcome(s: &WindowSnapshot, params: &Params, alpha_m: &IntAutomorphism) -> Result<CandidateOutcome> {
    Ok(match window_idempotent(s, params.window, params.idempotent_tol) {
        Ok(k) => {
            let residual = window_residual(s, &k);
            let (normalization_ok, witness) = torus_normalization(&k, alpha_m)?;
            CandidateOutcome::ShiftedHaar {
                subgroup: SubgroupDescriptor::Torus(k),
                residual,
                normalization_ok,
                witness,
            }
        }
        Err((chi, c)) => CandidateOutcome::NonIdempotent {
            witness: format!("coefficient {:.9}{:+.9}i of modulus {:.9} at character {chi:?}", c.re, c.im, c.norm()),
            character: Some(chi),
            modulus: Some(c.norm()),
        },
    })
}

/// ℤ-marginal screen: a measure on ℤ ⋉ B whose levels carry two or more atoms
/// is dissipating. Returns the finished classification in that case.
fn level_screen(levels: &AtomicMeasure<i64>, params: &Params) -> Result<Option<Classification>> {
    if levels.is_empty() {
        return Err(Error::InvalidInput("empty level measure".into()));
    }
    if levels.len() < 2 {
        return Ok(None);
    }
    let z = LatticeGroup { dim: 1 };
    let marginal = levels.map(|m| vec![*m]);
    let n = CONCENTRATION_STEPS.min(params.n_max);
    let c = concentration_function(&z, &marginal, &BTreeSet::from([vec![0]]), n)?;
    let concentration = c.iter().enumerate().map(|(i, v)| record("ℤ-marginal, K = {0}".into(), i + 1, v)).collect();
    let evidence = DissipationEvidence {
        rule: format!(
            "the ℤ-marginal has {} atoms; a non-degenerate walk on ℤ dissipates and compact fibres do not change that",
            levels.len()
        ),
        concentration,
    };
    Ok(Some(Classification {
        verdict: ScpVerdict::Dissipating { evidence },
        params: params.clone(),
        candidates: Vec::new(),
        symmetrized: None,
        warnings: Vec::new(),
        trajectories: Vec::new(),
    }))
}

fn classify_finite(g: &FiniteGroup, mu: &AtomicMeasure<usize>, params: &Params) -> Result<Classification> {
    if let Some(&x) = mu.support().find(|&&x| x >= g.order()) {
        return Err(Error::InvalidInput(format!("atom {x} outside {}", g.name())));
    }
    let mut candidates = Vec::new();
    let mut trajectories = Vec::new();
    for &x in mu.support() {
        let t = shifted_sequence(g, mu, &x, params)?;
        let call = detect_convergence(&t, params.eps, params.horizon);
        let limit = t.last().expect("nonempty trajectory");
        let step = t.last_step().expect("nonempty trajectory");
        let outcome = if call.is_converged() {
            match nearest_finite_haar(g, limit) {
                Some((h, d)) if d.to_f64().unwrap_or(f64::INFINITY) <= params.idempotent_tol => {
                    let moved = h.iter().find(|&&k| !h.contains(&g.conjugate(x, k)));
                    CandidateOutcome::ShiftedHaar {
                        residual: d.to_f64().unwrap_or(f64::NAN),
                        normalization_ok: moved.is_none(),
                        witness: moved.map(|&k| {
                            format!("x·{}·x⁻¹ = {} leaves K", g.element_label(k), g.element_label(g.conjugate(x, k)))
                        }),
                        subgroup: SubgroupDescriptor::Finite { elements: h },
                    }
                }
                Some((_, d)) => CandidateOutcome::NonIdempotent {
                    witness: format!(
                        "total variation {:.3e} to the nearest Haar measure",
                        d.to_f64().unwrap_or(f64::NAN)
                    ),
                    character: None,
                    modulus: None,
                },
                None => CandidateOutcome::NonIdempotent {
                    witness: "the heaviest atoms do not form a subgroup".into(),
                    character: None,
                    modulus: None,
                },
            }
        } else {
            CandidateOutcome::Unresolved
        };
        let shift = g.element_label(x).to_string();
        trajectories.push(export(format!("shifted_{x}"), &t));
        candidates.push(CandidateRecord {
            shift,
            convergence: call.status,
            outcome,
            limit: Some(atomic_summary(g, limit, step)),
            warnings: t.warnings().to_vec(),
        });
    }
    let t = symmetrized_sequence(g, mu, params)?;
    let rho = t.last().expect("nonempty trajectory");
    let check = mu.reflect(g);
    let residual = mu.convolve(g, rho).convolve(g, &check).tv_distance_f64(rho);
    let symmetrized = Some(match nearest_finite_haar(g, rho) {
        Some((h, d)) => SymmetrizedRecord {
            normalized_by_support: Some(mu.support().all(|&x| g.conjugate_set(x, &h) == h)),
            subgroup: Some(SubgroupDescriptor::Finite { elements: h }),
            distance_to_haar: d.to_f64(),
            invariance_residual: Some(residual),
        },
        None => SymmetrizedRecord {
            subgroup: None,
            distance_to_haar: None,
            invariance_residual: Some(residual),
            normalized_by_support: None,
        },
    });
    trajectories.push(export("symmetrized".into(), &t));
    Ok(finish(candidates, trajectories, symmetrized, Vec::new(), params))
}

fn box_set(dim: usize, r: i64) -> BTreeSet<Vec<i64>> {
    crate::measures::window(dim, r as u32).into_iter().collect()
}

fn classify_lattice(l: &LatticeGroup, mu: &AtomicMeasure<Vec<i64>>, params: &Params) -> Result<Classification> {
    if let Some(x) = mu.support().find(|x| x.len() != l.dim) {
        return Err(Error::Dimension { expected: l.dim, got: x.len() });
    }
    if mu.len() >= 2 {
        let n = CONCENTRATION_STEPS.min(params.n_max);
        let mut concentration = Vec::new();
        let mut warnings = Vec::new();
        let span = mu.support().flat_map(|x| x.iter().map(|c| c.unsigned_abs() as usize)).max().unwrap_or(0) * 2 + 1;
        for r in [1i64, 2, 4, 8] {
            let k = box_set(l.dim, r);
            let support_bound = (span * n + 1).pow(l.dim as u32);
            if support_bound.saturating_mul(k.len() * k.len()) > CONCENTRATION_BUDGET {
                warnings.push(format!("concentration on the box of radius {r} skipped (work bound)"));
                continue;
            }
            let c = concentration_function(l, mu, &k, n)?;
            concentration.push(record(format!("box of radius {r}"), n, c.last().expect("n ≥ 1")));
        }
        let evidence = DissipationEvidence {
            rule: format!(
                "{} atoms on ℤ^{}: a walk that is not a point mass dissipates on a torsion-free discrete abelian group",
                mu.len(),
                l.dim
            ),
            concentration,
        };
        return Ok(Classification {
            verdict: ScpVerdict::Dissipating { evidence },
            params: params.clone(),
            candidates: Vec::new(),
            symmetrized: None,
            warnings,
            trajectories: Vec::new(),
        });
    }
    let x = mu.support().next().expect("nonempty").clone();
    let t = shifted_sequence(l, mu, &x, params)?;
    let call = detect_convergence(&t, params.eps, params.horizon);
    let limit = t.last().expect("nonempty trajectory");
    let outcome = if call.is_converged() && *limit == AtomicMeasure::dirac(vec![0; l.dim]) {
        CandidateOutcome::ShiftedHaar {
            subgroup: SubgroupDescriptor::LatticeTrivial { dim: l.dim },
            residual: 0.0,
            normalization_ok: true,
            witness: None,
        }
    } else {
        CandidateOutcome::Unresolved
    };
    let candidates = vec![CandidateRecord {
        shift: format!("{x:?}"),
        convergence: call.status,
        outcome,
        limit: Some(atomic_summary(l, limit, t.last_step().expect("nonempty"))),
        warnings: t.warnings().to_vec(),
    }];
    let trajectories = vec![export("shifted".into(), &t)];
    Ok(finish(candidates, trajectories, None, Vec::new(), params))
}

fn check_dim(alpha: &IntAutomorphism, d: usize) -> Result<()> {
    if alpha.dim() != d {
        return Err(Error::Dimension { expected: alpha.dim(), got: d });
    }
    Ok(())
}

fn classify_torus_rational(
    alpha: &IntAutomorphism,
    lambda: &AtomicMeasure<RationalPoint>,
    m: i64,
    params: &Params,
) -> Result<Classification> {
    let dim = alpha.dim();
    if let Some(x) = lambda.support().find(|x| x.dim() != dim) {
        return Err(Error::Dimension { expected: dim, got: x.dim() });
    }
    let base = RationalTorus { dim };
    let alpha_m = alpha.pow(m);
    let mut candidates = Vec::new();
    let mut trajectories = Vec::new();
    let mut symmetrized = None;
    for (i, c) in lambda.support().enumerate() {
        let t = shifted_sequence_semidirect(&base, alpha, lambda, m, c, params)?;
        let call = detect_convergence(&t, params.eps, params.horizon);
        let limit = t.last().expect("nonempty trajectory");
        let step = t.last_step().expect("nonempty trajectory");
        let outcome = if call.is_converged() {
            match nearest_finite_haar(&base, limit) {
                Some((h, d)) if d.to_f64().unwrap_or(f64::INFINITY) <= params.idempotent_tol => {
                    let points: Vec<RationalPoint> = h.iter().cloned().collect();
                    let k = TorusSubgroup::generated_by(dim, &points)?;
                    let moved = h.iter().find(|p| !h.contains(&alpha_m.apply_rational(p)));
                    CandidateOutcome::ShiftedHaar {
                        subgroup: SubgroupDescriptor::Torus(k),
                        residual: d.to_f64().unwrap_or(f64::NAN),
                        normalization_ok: moved.is_none(),
                        witness: moved
                            .map(|p| format!("x·{}·x⁻¹ = {} leaves K", p.label(), alpha_m.apply_rational(p).label())),
                    }
                }
                Some((_, d)) => CandidateOutcome::NonIdempotent {
                    witness: format!(
                        "total variation {:.3e} to the nearest Haar measure",
                        d.to_f64().unwrap_or(f64::NAN)
                    ),
                    character: None,
                    modulus: None,
                },
                None => CandidateOutcome::NonIdempotent {
                    witness: "the heaviest atoms do not form a subgroup".into(),
                    character: None,
                    modulus: None,
                },
            }
        } else {
            CandidateOutcome::Unresolved
        };
        if symmetrized.is_none() && call.is_converged() {
            // ρ = P P̌ and μρμ̌ = λ′ αᵐ(ρ) λ̌′ on the abelian base
            let rho = limit.convolve(&base, &limit.reflect(&base));
            let moved =
                lambda.convolve(&base, &rho.pushforward(&base, alpha, m)).convolve(&base, &lambda.reflect(&base));
            let haar = nearest_finite_haar(&base, &rho);
            symmetrized = Some(SymmetrizedRecord {
                normalized_by_support: haar.as_ref().map(|(h, _)| {
                    lambda.support().all(|c| {
                        h.iter()
                            .all(|p| h.contains(&base.op(&base.op(c, &alpha_m.apply_rational(p)), &base.inverse(c))))
                    })
                }),
                subgroup: haar
                    .as_ref()
                    .and_then(|(h, _)| TorusSubgroup::generated_by(dim, &h.iter().cloned().collect::<Vec<_>>()).ok())
                    .map(SubgroupDescriptor::Torus),
                distance_to_haar: haar.as_ref().and_then(|(_, d)| d.to_f64()),
                invariance_residual: Some(moved.tv_distance_f64(&rho)),
            });
        }
        trajectories.push(export(format!("shifted_{i}"), &t));
        candidates.push(CandidateRecord {
            shift: format!("({}, {m})", c.label()),
            convergence: call.status,
            outcome,
            limit: Some(atomic_summary(&base, limit, step)),
            warnings: t.warnings().to_vec(),
        });
    }
    Ok(finish(candidates, trajectories, symmetrized, Vec::new(), params))
}

fn symmetrized_window(s: &WindowSnapshot, params: &Params) -> Result<SymmetrizedRecord> {
    let rho = WindowSnapshot::new(
        std::sync::Arc::new(s.chars().to_vec()),
        s.coeffs().iter().map(|c| Complex64::new(c.norm_sqr(), 0.0)).collect(),
    )?;
    let k = window_idempotent(&rho, params.window, params.idempotent_tol).ok();
    Ok(SymmetrizedRecord {
        distance_to_haar: k.as_ref().map(|k| window_residual(&rho, k)),
        subgroup: k.map(SubgroupDescriptor::Torus),
        invariance_residual: None,
        normalized_by_support: None,
    })
}

fn classify_torus_haar(alpha: &IntAutomorphism, k: &TorusSubgroup, m: i64, params: &Params) -> Result<Classification> {
    check_dim(alpha, k.dim())?;
    let zero = TorusPoint::zero(k.dim());
    let t = shifted_sequence_spectral(&SpectralMeasure::haar(k), alpha, m, &zero, params)?;
    let call = detect_convergence(&t, params.eps, params.horizon);
    let limit = t.last().expect("nonempty trajectory");
    let outcome =
        if call.is_converged() { window_outcome(limit, params, &alpha.pow(m))? } else { CandidateOutcome::Unresolved };
    let symmetrized = call.is_converged().then(|| symmetrized_window(limit, params)).transpose()?;
    let candidates = vec![CandidateRecord {
        shift: format!("(0, {m})"),
        convergence: call.status,
        outcome,
        limit: Some(window_summary(limit, t.last_step().expect("nonempty"), params.window)),
        warnings: t.warnings().to_vec(),
    }];
    Ok(finish(candidates, vec![export("shifted_0".into(), &t)], symmetrized, Vec::new(), params))
}

/// Checks that the map stored with a subspace measure is the restriction of
/// `α^{sign m}`.
fn check_subspace_map(alpha: &IntAutomorphism, s: &SubspaceMeasure, m: i64) -> Result<()> {
    check_dim(alpha, s.dim())?;
    if m == 0 {
        return Err(Error::Unsupported("subspace measures need a nonzero level".into()));
    }
    let a: DMatrix<f64> = alpha.power_matrix(m.signum()).to_f64();
    let b = s.basis();
    let residual = (&a * b - b * s.map()).amax();
    if residual > 1e-9 * (1.0 + b.amax()) {
        return Err(Error::InvalidInput(format!(
            "subspace map is not the restriction of the automorphism (residual {residual:e})"
        )));
    }
    Ok(())
}

fn classify_torus_subspace(
    alpha: &IntAutomorphism,
    s: &SubspaceMeasure,
    m: i64,
    params: &Params,
) -> Result<Classification> {
    check_subspace_map(alpha, s, m)?;
    let alpha_m = alpha.pow(m);
    let mut candidates = Vec::new();
    let mut trajectories = Vec::new();
    let mut symmetrized = None;
    for (i, (sc, _)) in s.atoms().iter().enumerate() {
        let t = shifted_sequence_subspace(s, m.unsigned_abs() as u32, sc, params)?;
        let call = detect_convergence(&t, params.eps, params.horizon);
        let limit = t.last().expect("nonempty trajectory");
        let outcome =
            if call.is_converged() { window_outcome(limit, params, &alpha_m)? } else { CandidateOutcome::Unresolved };
        if symmetrized.is_none() && call.is_converged() {
            symmetrized = Some(symmetrized_window(limit, params)?);
        }
        let point: Vec<String> =
            s.point(sc).iter().map(|&x| format!("{:.9}", if x.abs() < 5e-10 { 0.0 } else { x })).collect();
        trajectories.push(export(format!("shifted_{i}"), &t));
        candidates.push(CandidateRecord {
            shift: format!("(({}), {m})", point.join(", ")),
            convergence: call.status,
            outcome,
            limit: Some(window_summary(limit, t.last_step().expect("nonempty"), params.window)),
            warnings: t.warnings().to_vec(),
        });
    }
    Ok(finish(candidates, trajectories, symmetrized, Vec::new(), params))
}

fn set_label(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", v.join(","))
}

/// Describes the subgroup profile as explicit coordinates plus tails.
fn profile_label(p: &Profile<BTreeSet<usize>>) -> String {
    let explicit: Vec<String> = p.explicit().iter().map(set_label).collect();
    format!(
        "left tail {} | from {}: [{}] | right tail {}",
        set_label(p.left()),
        p.start(),
        explicit.join(" "),
        set_label(p.right())
    )
}

/// An element of `M` moved out of `M` by conjugation with `x = (e, m)`, when
/// `τᵐ(M) ≠ M`.
fn profile_witness(symbols: &FiniteGroup, sub: &Profile<BTreeSet<usize>>, m: i64) -> Option<String> {
    let shifted = shift_apply(sub, m);
    let i = shifted.zip_with(sub, |a, b| a == b).find_failure(|&eq| eq)?;
    let (here, there) = (sub.get(i), shifted.get(i));
    if let Some(&g) = here.difference(there).next() {
        return Some(format!(
            "y = {} at coordinate {i} lies in M, but x⁻¹yx carries it at coordinate {} where M is {}",
            symbols.element_label(g),
            i + m,
            set_label(sub.get(i + m))
        ));
    }
    let &g = there.difference(here).next()?;
    Some(format!(
        "y = {} at coordinate {} lies in M, but xyx⁻¹ carries it at coordinate {i} where M is {}",
        symbols.element_label(g),
        i + m,
        set_label(here)
    ))
}

fn classify_shift(symbols: &FiniteGroup, lambda: &ProfileMeasure, m: i64, params: &Params) -> Result<Classification> {
    let lambda = ProfileMeasure::new(symbols, lambda.coords().clone())?;
    let c = Profile::constant(symbols.identity_index());
    let t = shifted_sequence_profile(symbols, &lambda, m, &c, params)?;
    let call = detect_convergence(&t, params.eps, params.horizon);
    let limit = t.last().expect("nonempty trajectory");
    let outcome = if call.is_converged() {
        match limit.is_idempotent(symbols) {
            Some(sub) => {
                let witness = profile_witness(symbols, &sub, m);
                CandidateOutcome::ShiftedHaar {
                    residual: limit.distance(&ProfileMeasure::haar(&sub)?),
                    normalization_ok: witness.is_none(),
                    witness,
                    subgroup: SubgroupDescriptor::profile(symbols, sub)?,
                }
            }
            None => {
                let i = limit
                    .coords()
                    .find_failure(|a| a.is_uniform() && symbols.is_subgroup(&a.support_set()))
                    .unwrap_or(0);
                CandidateOutcome::NonIdempotent {
                    witness: format!("coordinate {i} is not uniform on a subgroup"),
                    character: None,
                    modulus: None,
                }
            }
        }
    } else {
        CandidateOutcome::Unresolved
    };
    let rho = symmetrize_profile(symbols, limit);
    let rho_sub = rho.is_idempotent(symbols);
    let symmetrized = Some(SymmetrizedRecord {
        normalized_by_support: rho_sub.as_ref().map(|s| shift_apply(s, m) == *s),
        distance_to_haar: rho_sub.as_ref().map(|s| ProfileMeasure::haar(s).map(|h| rho.distance(&h))).transpose()?,
        subgroup: rho_sub.map(|s| SubgroupDescriptor::Profile { coordinates: s }),
        invariance_residual: None,
    });
    let summary = LimitSummary::Profile {
        step: t.last_step().expect("nonempty"),
        coordinates: match limit.is_idempotent(symbols) {
            Some(sub) => format!("Haar on {}", profile_label(&sub)),
            None => format!("product measure with explicit span {:?}", limit.coords().span()),
        },
    };
    let candidates = vec![CandidateRecord {
        shift: format!("(e, {m})"),
        convergence: call.status,
        outcome,
        limit: Some(summary),
        warnings: t.warnings().to_vec(),
    }];
    let warnings = vec!["shift candidates on the profile group are taken from the identity section (e, m)".to_string()];
    Ok(finish(candidates, vec![export("shifted".into(), &t)], symmetrized, warnings, params))
}
