use super::{Automorphism, Group};

/// ℤ ⋉_α B with law `(b, n)(c, m) = (b·αⁿ(c), n + m)`.
#[derive(Clone, Debug)]
pub struct Semidirect<B, A> {
    pub base: B,
    pub alpha: A,
}

impl<B: Group, A: Automorphism<B>> Semidirect<B, A> {
    pub fn new(base: B, alpha: A) -> Self {
        Self { base, alpha }
    }

    pub fn embed(&self, b: B::Elem) -> (B::Elem, i64) {
        (b, 0)
    }

    /// The generator `(e, n)` of the ℤ factor raised to `n`.
    pub fn shift(&self, n: i64) -> (B::Elem, i64) {
        (self.base.identity(), n)
    }

    /// Conjugation by `x = (c, m)` restricted to B: `b ↦ c·αᵐ(b)·c⁻¹`.
    pub fn inner_on_base(&self, x: &(B::Elem, i64), b: &B::Elem) -> B::Elem {
        let moved = self.alpha.apply_pow(&self.base, b, x.1);
        self.base.op(&self.base.op(&x.0, &moved), &self.base.inverse(&x.0))
    }
}

impl<B: Group, A: Automorphism<B>> Group for Semidirect<B, A> {
    type Elem = (B::Elem, i64);

    fn identity(&self) -> Self::Elem {
        (self.base.identity(), 0)
    }

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let moved = self.alpha.apply_pow(&self.base, &b.0, a.1);
        (self.base.op(&a.0, &moved), a.1 + b.1)
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        let inv = self.base.inverse(&a.0);
        (self.alpha.apply_pow(&self.base, &inv, -a.1), -a.1)
    }

    fn label(&self, a: &Self::Elem) -> String {
        format!("({}, {})", self.base.label(&a.0), a.1)
    }
}
