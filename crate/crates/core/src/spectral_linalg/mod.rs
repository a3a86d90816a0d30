//! Exact polynomial and matrix analysis: characteristic polynomials,
//! Kronecker's unit-circle test, certified root isolation, Newton polygons
//! and the contracting/neutral/expanding split.

mod charpoly;
mod cyclotomic;
mod newton;
mod polynomial;
mod roots;
mod split;
mod verdicts;

pub use charpoly::{char_poly, char_poly_int, char_poly_rat};
pub use cyclotomic::{
    cyclotomic, cyclotomic_factorization, euler_phi, has_root_of_unity_factor, has_root_of_unity_factor_rat,
    kronecker_all_roots_unit_modulus, root_of_unity_bound, root_of_unity_orders,
};
pub use newton::{is_prime, newton_polygon, prime_factors, valuation, valuation_int, NewtonPolygon};
pub use polynomial::{IntPolynomial, Polynomial, RatPolynomial};
pub use roots::{isolate_roots, isolate_squarefree, CertifiedRoot, Interval, MODULUS_WIDTH};
pub use split::{
    contraction_split, contraction_split_int, ClassifiedRoot, ContractionSplit, RootClass, SplitSummary,
    SUBSPACE_RESIDUAL,
};
pub use verdicts::{
    distality_verdict, distality_verdict_poly, ergodicity_verdict, integrality_trichotomy, DistalityVerdict, Trichotomy,
};
