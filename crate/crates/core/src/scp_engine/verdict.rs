use serde::Serialize;

use crate::dynamics::{ConvergenceStatus, Params};
use crate::groups::SubgroupDescriptor;

/// Exact concentration value `cₙ(K)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationRecord {
    pub set: String,
    pub n: usize,
    pub value: String,
    pub value_f64: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DissipationEvidence {
    pub rule: String,
    pub concentration: Vec<ConcentrationRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrackedCoeff {
    pub character: Vec<i64>,
    pub re: f64,
    pub im: f64,
    pub modulus: f64,
}

/// Compact description of a limit snapshot.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LimitSummary {
    Atomic { step: usize, support_size: usize, atoms: Vec<(String, f64)> },
    Window { step: usize, radius: u32, tracked: Vec<TrackedCoeff> },
    Profile { step: usize, coordinates: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ViolationReason {
    /// The shifted limit is not a Haar measure.
    NonIdempotentLimit { witness: String, character: Option<Vec<i64>>, modulus: Option<f64> },
    /// The limit is Haar on `K` but `xKx⁻¹ ≠ K`.
    LimitNotNormalizedByShift { subgroup: SubgroupDescriptor, witness: String },
}

/// Iteration budget spent without a decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetRecord {
    pub n_max: usize,
    pub runs: Vec<(String, ConvergenceStatus)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ScpVerdict {
    Dissipating {
        evidence: DissipationEvidence,
    },
    ShiftedHaar {
        shift: String,
        subgroup: SubgroupDescriptor,
        description: String,
        residual: f64,
        normalization_ok: bool,
    },
    Violation {
        shift: String,
        #[serde(flatten)]
        reason: ViolationReason,
        limit: LimitSummary,
    },
    Inconclusive {
        budget: BudgetRecord,
    },
}

impl ScpVerdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Dissipating { .. } => "dissipating",
            Self::ShiftedHaar { .. } => "shifted_haar",
            Self::Violation { .. } => "violation",
            Self::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Self::Violation { .. })
    }

    pub fn subgroup(&self) -> Option<&SubgroupDescriptor> {
        match self {
            Self::ShiftedHaar { subgroup, .. } => Some(subgroup),
            _ => None,
        }
    }
}

/// Result for one shift candidate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CandidateOutcome {
    ShiftedHaar { subgroup: SubgroupDescriptor, residual: f64, normalization_ok: bool, witness: Option<String> },
    NonIdempotent { witness: String, character: Option<Vec<i64>>, modulus: Option<f64> },
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateRecord {
    pub shift: String,
    pub convergence: ConvergenceStatus,
    pub outcome: CandidateOutcome,
    pub limit: Option<LimitSummary>,
    pub warnings: Vec<String>,
}

/// The limit of `μⁿμ̌ⁿ` and the residual of `μρμ̌ = ρ` where it is computed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetrizedRecord {
    pub subgroup: Option<SubgroupDescriptor>,
    pub distance_to_haar: Option<f64>,
    pub invariance_residual: Option<f64>,
    pub normalized_by_support: Option<bool>,
}

/// A CSV rendering of one trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryExport {
    pub name: String,
    pub csv: String,
}

/// Full output of the classification pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub verdict: ScpVerdict,
    pub params: Params,
    pub candidates: Vec<CandidateRecord>,
    pub symmetrized: Option<SymmetrizedRecord>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub trajectories: Vec<TrajectoryExport>,
}
