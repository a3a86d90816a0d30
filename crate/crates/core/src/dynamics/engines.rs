use std::collections::BTreeSet;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use super::trajectory::{Located, Params, Trajectory};
use crate::error::{Error, Result};
use crate::groups::{Automorphism, FiniteGroup, Group, Profile};
use crate::measures::{AtomicMeasure, ProfileMeasure};

/// `μ, μ², …, μ^{n_max}`, exactly.
pub fn convolution_powers<G: Group>(
    group: &G,
    mu: &AtomicMeasure<G::Elem>,
    params: &Params,
) -> Result<Trajectory<AtomicMeasure<G::Elem>>>
where
    G::Elem: Hash + Located,
{
    params.validate()?;
    let mut t = Trajectory::new(params.clone(), true);
    let mut cur = mu.clone();
    t.push(1, cur.clone())?;
    for n in 2..=params.n_max {
        if t.should_stop() {
            break;
        }
        cur = cur.convolve(group, mu);
        t.push(n, cur.clone())?;
    }
    Ok(t)
}

/// `μⁿμ̌ⁿ` via `ρ₁ = μμ̌`, `ρ_{n+1} = μ ρₙ μ̌`, exactly.
pub fn symmetrized_sequence<G: Group>(
    group: &G,
    mu: &AtomicMeasure<G::Elem>,
    params: &Params,
) -> Result<Trajectory<AtomicMeasure<G::Elem>>>
where
    G::Elem: Hash + Located,
{
    params.validate()?;
    let check = mu.reflect(group);
    let mut t = Trajectory::new(params.clone(), true);
    let mut cur = mu.convolve(group, &check);
    t.push(1, cur.clone())?;
    for n in 2..=params.n_max {
        if t.should_stop() {
            break;
        }
        cur = mu.convolve(group, &cur).convolve(group, &check);
        t.push(n, cur.clone())?;
    }
    Ok(t)
}

/// Partial products `λ · φ(λ) ⋯ φ^{n−1}(λ)` for an automorphism `φ`, recorded
/// at steps `first_step, first_step + 1, …`.
pub fn product_sequence<G: Group>(
    group: &G,
    lambda: &AtomicMeasure<G::Elem>,
    phi: impl Fn(&G::Elem) -> G::Elem,
    first_step: usize,
    params: &Params,
) -> Result<Trajectory<AtomicMeasure<G::Elem>>>
where
    G::Elem: Hash + Located,
{
    params.validate()?;
    let mut t = Trajectory::new(params.clone(), false);
    let mut term = lambda.clone();
    let mut acc = lambda.clone();
    t.push(first_step, acc.clone())?;
    for k in 1..params.n_max {
        if t.should_stop() {
            break;
        }
        term = term.map(&phi);
        acc = acc.convolve(group, &term);
        t.push(first_step + k, acc.clone())?;
    }
    Ok(t)
}

/// `λ · α(λ) ⋯ αⁿ(λ)` for `n = 0, 1, …`.
pub fn orbit_product<G: Group, A: Automorphism<G>>(
    group: &G,
    lambda: &AtomicMeasure<G::Elem>,
    alpha: &A,
    params: &Params,
) -> Result<Trajectory<AtomicMeasure<G::Elem>>>
where
    G::Elem: Hash + Located,
{
    product_sequence(group, lambda, |x| alpha.apply(group, x), 0, params)
}

/// `μⁿx⁻ⁿ = ∏_{k<n} xᵏ(μx⁻¹)x⁻ᵏ` in a group where `μ` is finitely supported.
pub fn shifted_sequence<G: Group>(
    group: &G,
    mu: &AtomicMeasure<G::Elem>,
    x: &G::Elem,
    params: &Params,
) -> Result<Trajectory<AtomicMeasure<G::Elem>>>
where
    G::Elem: Hash + Located,
{
    let x_inv = group.inverse(x);
    let lambda = mu.translate_right(group, &x_inv);
    let mut t = product_sequence(group, &lambda, |b| group.op(&group.op(x, b), &x_inv), 1, params)?;
    if !mu.contains(x) {
        t.warn(format!("shift element {} is not in the support", group.label(x)));
    }
    Ok(t)
}

/// `μⁿx⁻ⁿ` on `ℤ ⋉_α B` for `μ = λ′·δ_{(e,m)}` and `x = (c, m)`: with
/// `λₓ = λ′δ_{c⁻¹}` and `Inn(x)(b) = c αᵐ(b) c⁻¹` this is `∏_{k<n} Inn(x)ᵏ(λₓ)`,
/// a measure on the compact base.
pub fn shifted_sequence_semidirect<B: Group, A: Automorphism<B>>(
    base: &B,
    alpha: &A,
    lambda: &AtomicMeasure<B::Elem>,
    m: i64,
    c: &B::Elem,
    params: &Params,
) -> Result<Trajectory<AtomicMeasure<B::Elem>>>
where
    B::Elem: Hash + Located,
{
    let c_inv = base.inverse(c);
    let lambda_x = lambda.translate_right(base, &c_inv);
    let inn = |b: &B::Elem| base.op(&base.op(c, &alpha.apply_pow(base, b, m)), &c_inv);
    let mut t = product_sequence(base, &lambda_x, inn, 1, params)?;
    if !lambda.contains(c) {
        t.warn(format!("shift element ({}, {m}) is not in the support", base.label(c)));
    }
    Ok(t)
}

/// The same product identity on `ℤ ⋉_τ L^ℤ` with product measures: `x = (c, m)`,
/// `Inn(x)(ν) = c τᵐ(ν) c⁻¹`.
pub fn shifted_sequence_profile(
    symbols: &FiniteGroup,
    lambda: &ProfileMeasure,
    m: i64,
    c: &Profile<usize>,
    params: &Params,
) -> Result<Trajectory<ProfileMeasure>> {
    params.validate()?;
    let c_inv = c.map(|&g| symbols.inverse(&g));
    let lambda_x = lambda.translate_right(symbols, &c_inv);
    let mut t = Trajectory::new(params.clone(), false);
    let mut term = lambda_x.clone();
    let mut acc = lambda_x;
    t.push(1, acc.clone())?;
    for n in 2..=params.n_max {
        if t.should_stop() {
            break;
        }
        term = term.shift(m).conjugate(symbols, c);
        acc = acc.convolve(symbols, &term);
        t.push(n, acc.clone())?;
    }
    let in_support = lambda.coords().zip_with(c, |a, x| a.contains(x)).all(|&b| b);
    if !in_support {
        t.warn(format!("shift element with m = {m} is not in the support"));
    }
    Ok(t)
}

/// `ν ν̌` for a product measure, the symmetrization of a shifted sequence state.
pub fn symmetrize_profile(symbols: &FiniteGroup, nu: &ProfileMeasure) -> ProfileMeasure {
    nu.convolve(symbols, &nu.reflect(symbols))
}

/// `cₙ = sup_g μⁿ(Kg)` for `n = 1..=n_max`, exactly. The supremum runs over the
/// finitely many `g` with `Kg` meeting the support of `μⁿ`.
pub fn concentration_function<G: Group>(
    group: &G,
    mu: &AtomicMeasure<G::Elem>,
    k: &BTreeSet<G::Elem>,
    n_max: usize,
) -> Result<Vec<BigRational>> {
    if k.is_empty() {
        return Err(Error::InvalidInput("empty concentration set".into()));
    }
    let k_inv: Vec<G::Elem> = k.iter().map(|a| group.inverse(a)).collect();
    let mut out = Vec::with_capacity(n_max);
    let mut cur = mu.clone();
    for n in 1..=n_max {
        if n > 1 {
            cur = cur.convolve(group, mu);
        }
        let nums = cur.numerators();
        let mut candidates = BTreeSet::new();
        for s in nums.keys() {
            for a in &k_inv {
                candidates.insert(group.op(a, s));
            }
        }
        let mut best = BigUint::zero();
        for g in &candidates {
            let mass: BigUint = k.iter().filter_map(|a| nums.get(&group.op(a, g))).sum();
            if mass > best {
                best = mass;
            }
        }
        out.push(BigRational::new(BigInt::from(best), BigInt::from(cur.denominator().clone())));
    }
    Ok(out)
}

/// Whether a sequence is non-increasing.
pub fn is_non_increasing(values: &[BigRational]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0])
}
