use serde::Serialize;

use super::spec::{BuiltGroup, GroupSpec};
use crate::error::Result;
use crate::spectral_linalg::{distality_verdict, DistalityVerdict};

/// Distality of the conjugation action of one generator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorVerdict {
    pub generator: String,
    pub distal: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistalityPrediction {
    pub group: String,
    pub generators: Vec<GeneratorVerdict>,
    /// Conjunction over the generators.
    pub point_wise_distal: bool,
}

pub fn predict_point_wise_distal(group: &GroupSpec) -> Result<DistalityPrediction> {
    predict_built(&group.build()?)
}

pub fn predict_built(group: &BuiltGroup) -> Result<DistalityPrediction> {
    let generators = match group {
        BuiltGroup::Finite(g) => vec![GeneratorVerdict {
            generator: format!("inner automorphisms of {}", g.name()),
            distal: true,
            detail: "compact group: every automorphism action is distal".into(),
        }],
        BuiltGroup::Lattice(l) => vec![GeneratorVerdict {
            generator: format!("translations of ℤ^{}", l.dim),
            distal: true,
            detail: "abelian group: conjugation is trivial".into(),
        }],
        BuiltGroup::Torus(a) => {
            let (distal, detail) = match distality_verdict(a)? {
                DistalityVerdict::Distal { cyclotomic_factors } => {
                    let f: Vec<String> = cyclotomic_factors.iter().map(|(m, k)| format!("Φ_{m}^{k}")).collect();
                    (true, format!("characteristic polynomial factors as {}", f.join(" · ")))
                }
                DistalityVerdict::NonDistal { witness, .. } => (
                    false,
                    format!(
                        "eigenvalue of modulus in [{:.12}, {:.12}] off the unit circle",
                        witness.modulus.lo, witness.modulus.hi
                    ),
                ),
            };
            vec![
                GeneratorVerdict {
                    generator: format!("translations of 𝕋^{}", a.dim()),
                    distal: true,
                    detail: "conjugation by the abelian fibre is trivial on it".into(),
                },
                GeneratorVerdict { generator: "(0, 1), acting by A".into(), distal, detail },
            ]
        }
        BuiltGroup::Shift(l) => vec![
            GeneratorVerdict {
                generator: format!("elements of {}^ℤ", l.name()),
                distal: true,
                detail: "conjugation inside a compact group".into(),
            },
            GeneratorVerdict {
                generator: "(e, 1), acting by the shift".into(),
                distal: l.order() == 1,
                detail: if l.order() == 1 {
                    "trivial symbol group".into()
                } else {
                    "the shift contracts points supported on the left half-line to the identity".into()
                },
            },
        ],
    };
    Ok(DistalityPrediction {
        group: group.describe(),
        point_wise_distal: generators.iter().all(|g| g.distal),
        generators,
    })
}
