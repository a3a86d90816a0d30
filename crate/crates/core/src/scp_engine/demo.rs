use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{IntAutomorphism, RationalPoint, TorusSubgroup};
use crate::measures::{AtomicMeasure, Provenance, SpectralMeasure};
use crate::spectral_linalg::distality_verdict;

/// Tolerance for the vanishing of coefficients off the line `n = 0`.
pub const L_INVARIANCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitDistance {
    pub k: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Example72Report {
    pub matrix: Vec<Vec<i64>>,
    pub window: u32,
    pub k_max: usize,
    /// Window distance from `α^k_*μ` to Haar measure on 𝕋².
    pub distances: Vec<OrbitDistance>,
    /// First `k` from which every listed distance is exactly 0.
    pub collapse_from: Option<usize>,
    /// Every distance with `k > window` is exactly 0.
    pub exact_zero_beyond_window: bool,
    pub distal: bool,
    /// Distal automorphism whose orbit of a non-Haar measure reaches Haar.
    pub not_tortrat: bool,
}

/// The automorphism `(w, z) ↦ (w + z, z)` of 𝕋².
pub fn example_7_2_automorphism() -> IntAutomorphism {
    IntAutomorphism::from_i64_rows(&[vec![1, 1], vec![0, 1]]).expect("unimodular")
}

/// `ν ⊗ ω_𝕋` for a measure `ν` on the first circle factor; invariant under
/// `L = {0} × 𝕋`.
pub fn l_invariant_measure(nu: &AtomicMeasure<RationalPoint>) -> Result<SpectralMeasure> {
    if let Some(x) = nu.support().find(|x| x.dim() != 1) {
        return Err(Error::Dimension { expected: 1, got: x.dim() });
    }
    let atoms: Vec<(RationalPoint, f64)> = nu.atoms_f64();
    Ok(SpectralMeasure::closed_form(2, None, Provenance::ExactFromAtoms, move |chi| {
        if chi[1] != 0 {
            return Complex64::new(0.0, 0.0);
        }
        atoms.iter().map(|(x, w)| x.character(&chi[..1]) * *w).sum()
    }))
}

/// Haar measure of `L = {0} × 𝕋`.
pub fn omega_l() -> SpectralMeasure {
    let l = crate::groups::Lattice::from_generators(2, &[vec![1, 0]]).expect("valid lattice");
    SpectralMeasure::haar(&TorusSubgroup::from_annihilator(l))
}

pub fn example_7_2_demo(mu: &SpectralMeasure, k_max: usize, window: u32) -> Result<Example72Report> {
    if mu.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: mu.dim() });
    }
    for (chi, c) in mu.window_coeffs(window) {
        if chi[1] != 0 && !(c.norm() <= L_INVARIANCE_TOL) {
            return Err(Error::NotLInvariant(format!("coefficient {c} at {chi:?}")));
        }
    }
    let alpha = example_7_2_automorphism();
    let haar = SpectralMeasure::haar(&TorusSubgroup::full(2));
    let mut distances = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let pushed = mu.pushforward(&alpha.pow(k as i64))?;
        distances.push(OrbitDistance { k, distance: pushed.distance(&haar, window)? });
    }
    let collapse_from =
        distances.iter().rposition(|d| d.distance != 0.0).map_or(Some(0), |i| (i < k_max).then_some(i + 1));
    let exact_zero_beyond_window = distances.iter().filter(|d| d.k > window as usize).all(|d| d.distance == 0.0);
    let distal = distality_verdict(&alpha)?.is_distal();
    let moved = distances.first().is_some_and(|d| d.distance > 0.0);
    Ok(Example72Report {
        matrix: vec![vec![1, 1], vec![0, 1]],
        window,
        k_max,
        distances,
        collapse_from,
        exact_zero_beyond_window,
        distal,
        not_tortrat: distal && moved && exact_zero_beyond_window && k_max > window as usize,
    })
}
