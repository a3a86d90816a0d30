//! SCP verdicts: simulation of shifted convolution powers checked against the
//! spectral prediction of point-wise distality.

mod classify;
mod counterexample;
mod crosscheck;
mod demo;
mod predict;
mod spec;
mod stability;
mod verdict;

pub use classify::{classify_built, classify_measure, window_idempotent};
pub use counterexample::{
    construct_counterexample, construct_counterexample_rat, half_line_subgroup, shift_counterexample,
    small_denominator, Counterexample, COLLISION_DENOMINATOR,
};
pub use crosscheck::{counterexample_for, cross_check_dichotomy, judge, Agreement, CrossCheckEntry, ExperimentReport};
pub use demo::{
    example_7_2_automorphism, example_7_2_demo, l_invariant_measure, omega_l, Example72Report, OrbitDistance,
    L_INVARIANCE_TOL,
};
pub use predict::{predict_built, predict_point_wise_distal, DistalityPrediction, GeneratorVerdict};
pub use spec::{BaseMeasure, BuiltGroup, FiniteGroupSpec, GroupSpec, ScpMeasure, MAX_FINITE_ORDER};
pub use stability::{
    product_embedding, quotient_injection_stability, torus_quotient, StabilityReport, StabilityStatus, StabilityTarget,
};
pub use verdict::*;
