//! Convolution dynamics of probability measures on concrete groups (finite
//! groups, ℤ^d, 𝕋^d, semidirect products ℤ ⋉ B and shift spaces) together with
//! exact spectral criteria for distality of toral automorphisms.

pub mod dynamics;
pub mod error;
pub mod groups;
pub mod harmonic;
pub mod matrix;
pub mod measures;
pub mod scp_engine;
pub mod spectral_linalg;

pub use error::{Error, Result};
