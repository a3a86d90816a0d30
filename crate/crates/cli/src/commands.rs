//! The non-scenario subcommands.

use serde::{Deserialize, Serialize};

use scp_core::groups::{IntAutomorphism, RationalPoint};
use scp_core::harmonic::{harmonic_space, HarmonicSpace};
use scp_core::measures::AtomicMeasure;
use scp_core::scp_engine::{example_7_2_demo, l_invariant_measure, omega_l, Example72Report, FiniteGroupSpec};
use scp_core::spectral_linalg::{
    contraction_split_int, distality_verdict, ergodicity_verdict, DistalityVerdict, SplitSummary,
};
use scp_core::Result;

use crate::scenario::{weighted, Atom};

#[derive(Clone, Debug, Serialize)]
pub struct MatrixReport {
    pub matrix: Vec<Vec<i64>>,
    /// Coefficients of the characteristic polynomial, constant term first.
    pub charpoly: Vec<i64>,
    pub distal: bool,
    pub ergodic: bool,
    pub distality: String,
    pub split: SplitSummary,
}

/// Spectral facts about an automorphism given as `"a,b;c,d"`.
pub fn classify_matrix(text: &str) -> Result<MatrixReport> {
    let a = IntAutomorphism::parse(text)?;
    let verdict = distality_verdict(&a)?;
    let distality = match &verdict {
        DistalityVerdict::Distal { cyclotomic_factors } => {
            let f: Vec<String> = cyclotomic_factors.iter().map(|(m, k)| format!("Φ_{m}^{k}")).collect();
            format!("distal: characteristic polynomial is {}", f.join(" · "))
        }
        DistalityVerdict::NonDistal { witness, .. } => {
            format!("not distal: eigenvalue of modulus in [{:.12}, {:.12}]", witness.modulus.lo, witness.modulus.hi)
        }
    };
    Ok(MatrixReport {
        matrix: a.matrix().to_i64_rows()?,
        charpoly: a.char_poly().to_i64().unwrap_or_default(),
        distal: verdict.is_distal(),
        ergodic: ergodicity_verdict(&a),
        distality,
        split: contraction_split_int(&a)?.summary(),
    })
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureFile {
    pub atoms: Vec<Atom<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarmonicReport {
    pub dim: usize,
    pub cosets: usize,
    pub choquet_deny: bool,
    pub space: HarmonicSpace,
}

pub fn harmonic(group_toml: &str, measure_toml: &str) -> std::result::Result<HarmonicReport, String> {
    let spec: FiniteGroupSpec = toml::from_str(group_toml).map_err(|e| format!("group file: {e}"))?;
    let file: MeasureFile = toml::from_str(measure_toml).map_err(|e| format!("measure file: {e}"))?;
    let g = spec.build().map_err(|e| e.to_string())?;
    let mu = weighted(&file.atoms, |x| Ok(*x)).map_err(|e| e.to_string())?;
    let space = harmonic_space(&g, &mu).map_err(|e| e.to_string())?;
    Ok(HarmonicReport { dim: space.dim(), cosets: space.cosets.len(), choquet_deny: space.is_choquet_deny(), space })
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoEntry {
    pub measure: String,
    pub report: Example72Report,
}

/// The orbit collapse for `ν ⊗ ω_𝕋` with `ν = ½δ₀ + ½δ_½`, and for `ω_L`.
pub fn demo_7_2(k_max: usize, window: u32) -> Result<Vec<DemoEntry>> {
    let nu =
        AtomicMeasure::uniform([RationalPoint::from_fractions(&[(0, 1)])?, RationalPoint::from_fractions(&[(1, 2)])?])?;
    Ok(vec![
        DemoEntry {
            measure: "(½δ_0 + ½δ_½) ⊗ Haar".into(),
            report: example_7_2_demo(&l_invariant_measure(&nu)?, k_max, window)?,
        },
        DemoEntry {
            measure: "Haar measure of {0} × 𝕋".into(), report: example_7_2_demo(&omega_l(), k_max, window)?
        },
    ])
}
