//! Concrete group structures: finite tables, lattices, tori, semidirect
//! products with ℤ, and shift spaces over a finite symbol group.

mod automorphism;
mod finite;
pub mod lattice;
mod semidirect;
mod shift;
mod subgroup;
mod torus;

use std::fmt::Debug;

pub use automorphism::{apply_rational_matrix, dual_automorphism, IntAutomorphism, PermAutomorphism};
pub use finite::FiniteGroup;
pub use lattice::Lattice;
pub use semidirect::Semidirect;
pub use shift::{shift_apply, Profile, Shift, ShiftGroup};
pub use subgroup::{
    profile_normalized, smith_annihilator, smith_annihilator_rational, SubgroupDescriptor, TorusSubgroup,
};
pub use torus::{LatticeGroup, RationalPoint, RationalTorus, TorusPoint, TorusSpec};

/// A group with computable multiplication and inversion.
pub trait Group {
    type Elem: Clone + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;

    fn label(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        let base = if n < 0 { self.inverse(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.op(&acc, &base);
        }
        acc
    }
}

/// An automorphism of `G`, applicable with any integer exponent.
pub trait Automorphism<G: Group> {
    fn apply_pow(&self, group: &G, x: &G::Elem, n: i64) -> G::Elem;

    fn apply(&self, group: &G, x: &G::Elem) -> G::Elem {
        self.apply_pow(group, x, 1)
    }
}
