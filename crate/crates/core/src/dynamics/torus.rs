use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use super::trajectory::{Params, Trajectory, WindowSnapshot};
use crate::error::{Error, Result};
use crate::groups::{IntAutomorphism, TorusPoint};
use crate::measures::{transpose_apply, window, SpectralMeasure, SubspaceMeasure};

/// The character window `‖χ‖∞ ≤ radius`, shared between snapshots.
pub fn window_chars(dim: usize, radius: u32) -> Arc<Vec<Vec<i64>>> {
    Arc::new(window(dim, radius))
}

/// Records `∏_{k<n} fₖ(χ)` on the window for `n = 1, 2, …` at steps
/// `first_step + n − 1`.
fn window_products(
    chars: Arc<Vec<Vec<i64>>>,
    params: &Params,
    first_step: usize,
    mut factor: impl FnMut(usize) -> Result<Vec<Complex64>>,
) -> Result<Trajectory<WindowSnapshot>> {
    params.validate()?;
    let mut t = Trajectory::new(params.clone(), false);
    let mut acc = factor(0)?;
    t.push(first_step, WindowSnapshot::new(chars.clone(), acc.clone())?)?;
    for k in 1..params.n_max {
        if t.should_stop() {
            break;
        }
        for (a, f) in acc.iter_mut().zip(factor(k)?) {
            *a *= f;
        }
        t.push(first_step + k, WindowSnapshot::new(chars.clone(), acc.clone())?)?;
    }
    Ok(t)
}

/// `μ̂(χ)ⁿ` on the window.
pub fn convolution_powers_spectral(mu: &SpectralMeasure, params: &Params) -> Result<Trajectory<WindowSnapshot>> {
    let chars = window_chars(mu.dim(), params.window);
    let base: Vec<Complex64> = chars.iter().map(|c| mu.coeff(c)).collect();
    window_products(chars, params, 1, |_| Ok(base.clone()))
}

/// `|μ̂(χ)|^{2n}` on the window.
pub fn symmetrized_sequence_spectral(mu: &SpectralMeasure, params: &Params) -> Result<Trajectory<WindowSnapshot>> {
    let chars = window_chars(mu.dim(), params.window);
    let base: Vec<Complex64> = chars.iter().map(|c| Complex64::new(mu.coeff(c).norm_sqr(), 0.0)).collect();
    window_products(chars, params, 1, |_| Ok(base.clone()))
}

/// Factors `λ̂((Mᵀ)ᵏχ)` along the dual orbit of every window character,
/// reduced modulo the period of `λ` when it has one.
fn dual_orbit_factors(
    lambda: SpectralMeasure,
    m: &crate::matrix::IntMatrix,
    chars: Arc<Vec<Vec<i64>>>,
) -> Result<impl FnMut(usize) -> Result<Vec<Complex64>>> {
    let rows = m.to_i64_rows()?;
    let period = lambda.period();
    let mut dual: Vec<Vec<i64>> = chars.to_vec();
    Ok(move |k: usize| {
        if k > 0 {
            for psi in dual.iter_mut() {
                *psi = transpose_apply(&rows, psi, period)
                    .ok_or_else(|| Error::Overflow(format!("dual orbit overflows i64 at step {k}")))?;
            }
        }
        Ok(dual.iter().map(|psi| lambda.coeff(psi)).collect())
    })
}

/// `λ · α(λ) ⋯ αⁿ(λ)` via `∏ᵢ λ̂((Aᵀ)ⁱχ)`, steps `n = 0, 1, …`.
pub fn orbit_product_spectral(
    lambda: &SpectralMeasure,
    alpha: &IntAutomorphism,
    params: &Params,
) -> Result<Trajectory<WindowSnapshot>> {
    if alpha.dim() != lambda.dim() {
        return Err(Error::Dimension { expected: lambda.dim(), got: alpha.dim() });
    }
    let chars = window_chars(lambda.dim(), params.window);
    let factor = dual_orbit_factors(lambda.clone(), alpha.matrix(), chars.clone())?;
    window_products(chars, params, 0, factor)
}

/// `μⁿx⁻ⁿ` on `ℤ ⋉_α 𝕋^d` for `μ = λ·δ_{(0,m)}` and `x = (c, m)`. The base is
/// abelian, so `Inn(x) = αᵐ` and the sequence is `∏_{k<n} αᵐᵏ(λ δ_{−c})`.
pub fn shifted_sequence_spectral(
    lambda: &SpectralMeasure,
    alpha: &IntAutomorphism,
    m: i64,
    c: &TorusPoint,
    params: &Params,
) -> Result<Trajectory<WindowSnapshot>> {
    if alpha.dim() != lambda.dim() || c.dim() != lambda.dim() {
        return Err(Error::Dimension { expected: lambda.dim(), got: alpha.dim() });
    }
    let lambda_x = lambda.convolve(&SpectralMeasure::dirac(c.neg()))?;
    let chars = window_chars(lambda.dim(), params.window);
    let factor = dual_orbit_factors(lambda_x, &alpha.power_matrix(m), chars.clone())?;
    window_products(chars, params, 1, factor)
}

fn subspace_factors(
    lambda: SubspaceMeasure,
    power: u32,
    chars: Arc<Vec<Vec<i64>>>,
) -> impl FnMut(usize) -> Result<Vec<Complex64>> {
    let mut term = lambda;
    move |k: usize| {
        if k > 0 {
            term = term.pushforward_power(power);
        }
        Ok(chars.iter().map(|c| term.coeff(c)).collect())
    }
}

/// Orbit product of a measure carried by an invariant subspace, iterating the
/// restricted map on subspace coordinates. Steps `n = 0, 1, …`.
pub fn orbit_product_subspace(lambda: &SubspaceMeasure, params: &Params) -> Result<Trajectory<WindowSnapshot>> {
    let chars = window_chars(lambda.dim(), params.window);
    window_products(chars.clone(), params, 0, subspace_factors(lambda.clone(), 1, chars))
}

/// Shifted sequence for `μ = λ·δ_{(0,m)}`, `m ≥ 1`, with `x = (c, m)` and `c = B s_c`
/// a point of the subspace image.
pub fn shifted_sequence_subspace(
    lambda: &SubspaceMeasure,
    m: u32,
    s_c: &DVector<f64>,
    params: &Params,
) -> Result<Trajectory<WindowSnapshot>> {
    if m == 0 {
        return Err(Error::Unsupported("subspace shifted sequence needs m ≥ 1".into()));
    }
    let lambda_x = lambda.translate(&(-s_c));
    let chars = window_chars(lambda.dim(), params.window);
    let mut t = window_products(chars.clone(), params, 1, subspace_factors(lambda_x, m, chars))?;
    if !lambda.atoms().iter().any(|(s, _)| (s - s_c).norm() == 0.0) {
        t.warn("shift element is not in the support");
    }
    Ok(t)
}
