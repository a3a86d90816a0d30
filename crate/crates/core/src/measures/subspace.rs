use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Provenance, SpectralMeasure};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A finitely supported measure on 𝕋^d whose atoms lie on the image of a
/// linear subspace `V ⊂ ℝ^d` invariant under the automorphism. Atoms are kept
/// in subspace coordinates `s` (the torus point is `B s mod 1`) and the
/// automorphism acts on them through its restriction `C` to `V`, so iterating
/// along a contracting subspace stays numerically stable.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceMeasure {
    basis: DMatrix<f64>,
    map: DMatrix<f64>,
    atoms: Vec<(DVector<f64>, f64)>,
}

impl SubspaceMeasure {
    pub fn new(basis: DMatrix<f64>, map: DMatrix<f64>, atoms: Vec<(DVector<f64>, f64)>) -> Result<Self> {
        let k = basis.ncols();
        if map.shape() != (k, k) {
            return Err(Error::Dimension { expected: k, got: map.nrows() });
        }
        if let Some((s, _)) = atoms.iter().find(|(s, _)| s.len() != k) {
            return Err(Error::Dimension { expected: k, got: s.len() });
        }
        if atoms.iter().any(|(_, w)| *w < 0.0) {
            return Err(Error::InvalidInput("negative weight".into()));
        }
        let total: f64 = atoms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("weights sum to {total}")));
        }
        Ok(Self { basis, map, atoms })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn map(&self) -> &DMatrix<f64> {
        &self.map
    }

    pub fn atoms(&self) -> &[(DVector<f64>, f64)] {
        &self.atoms
    }

    /// Torus coordinates in `[0, 1)` of the atom with subspace coordinates `s`.
    pub fn point(&self, s: &DVector<f64>) -> Vec<f64> {
        (&self.basis * s).iter().map(|x| x.rem_euclid(1.0)).collect()
    }

    pub fn points(&self) -> Vec<(Vec<f64>, f64)> {
        self.atoms.iter().map(|(s, w)| (self.point(s), *w)).collect()
    }

    fn phase(&self, chi: &[i64], s: &DVector<f64>) -> f64 {
        let x = &self.basis * s;
        let p: f64 = chi.iter().zip(x.iter()).map(|(&c, &xi)| c as f64 * xi).sum();
        p - p.round()
    }

    pub fn coeff(&self, chi: &[i64]) -> Complex64 {
        self.atoms.iter().map(|(s, w)| Complex64::from_polar(*w, TAU * self.phase(chi, s))).sum()
    }

    /// `αⁿ(μ)` for `n ≥ 0`.
    pub fn pushforward_power(&self, n: u32) -> Self {
        let cn = self.map.pow(n);
        Self {
            basis: self.basis.clone(),
            map: self.map.clone(),
            atoms: self.atoms.iter().map(|(s, w)| (&cn * s, *w)).collect(),
        }
    }

    /// `μ · δ_c` for a point `c = B s₀` of the subspace image.
    pub fn translate(&self, s0: &DVector<f64>) -> Self {
        Self {
            basis: self.basis.clone(),
            map: self.map.clone(),
            atoms: self.atoms.iter().map(|(s, w)| (s + s0, *w)).collect(),
        }
    }

    /// Image under `x ↦ M x` for an integer matrix intertwining the
    /// automorphism (as for a quotient map by an invariant finite subgroup).
    pub fn pushforward_matrix(&self, m: &IntMatrix) -> Result<Self> {
        if m.cols() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: m.cols() });
        }
        Ok(Self { basis: m.to_f64() * &self.basis, map: self.map.clone(), atoms: self.atoms.clone() })
    }

    /// Largest distance of an atom from the subspace origin.
    pub fn spread(&self) -> f64 {
        self.atoms.iter().map(|(s, _)| (&self.basis * s).norm()).fold(0.0, f64::max)
    }

    pub fn to_spectral(&self) -> SpectralMeasure {
        let me = self.clone();
        SpectralMeasure::closed_form(self.dim(), None, Provenance::ExactFromAtoms, move |chi| me.coeff(chi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pushforward_matches_matrix_action() {
        // diag(1/2, 3): the first axis is contracting
        let basis = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let map = DMatrix::from_element(1, 1, 0.5);
        let mu = SubspaceMeasure::new(
            basis,
            map,
            vec![(DVector::from_element(1, 0.0), 0.5), (DVector::from_element(1, 0.3), 0.5)],
        )
        .unwrap();
        let p = mu.pushforward_power(2);
        assert!((p.points()[1].0[0] - 0.075).abs() < 1e-15);
        let c = p.coeff(&[1, 0]);
        let expected = 0.5 + 0.5 * Complex64::from_polar(1.0, TAU * 0.075);
        assert!((c - expected).norm() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        let basis = DMatrix::from_column_slice(1, 1, &[1.0]);
        let map = DMatrix::from_element(1, 1, 0.5);
        assert!(SubspaceMeasure::new(basis, map, vec![(DVector::from_element(1, 0.0), 0.7)]).is_err());
    }
}
