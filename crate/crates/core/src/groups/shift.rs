use serde::Serialize;

use super::{Automorphism, FiniteGroup, Group};

/// A ℤ-indexed sequence given by finitely many explicit coordinates plus a
/// constant left tail and right tail. Coordinate `i < start` reads `left`,
/// `i ≥ start + explicit.len()` reads `right`. Always kept canonical: the
/// explicit block never begins with `left` or ends with `right`, so equal
/// sequences are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Profile<T> {
    start: i64,
    explicit: Vec<T>,
    left: T,
    right: T,
}

impl<T: Clone + Eq> Profile<T> {
    pub fn new(start: i64, explicit: Vec<T>, left: T, right: T) -> Self {
        let mut p = Self { start, explicit, left, right };
        p.canonicalize();
        p
    }

    pub fn constant(value: T) -> Self {
        Self::new(0, Vec::new(), value.clone(), value)
    }

    /// `left` on coordinates `< boundary`, `right` from `boundary` on.
    pub fn step(boundary: i64, left: T, right: T) -> Self {
        Self::new(boundary, Vec::new(), left, right)
    }

    fn canonicalize(&mut self) {
        let lead = self.explicit.iter().take_while(|v| **v == self.left).count();
        self.explicit.drain(..lead);
        self.start += lead as i64;
        while self.explicit.last() == Some(&self.right) {
            self.explicit.pop();
        }
        if self.explicit.is_empty() && self.left == self.right {
            self.start = 0;
        }
    }

    pub fn get(&self, i: i64) -> &T {
        if i < self.start {
            &self.left
        } else {
            let off = (i - self.start) as usize;
            self.explicit.get(off).unwrap_or(&self.right)
        }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn explicit(&self) -> &[T] {
        &self.explicit
    }

    pub fn left(&self) -> &T {
        &self.left
    }

    pub fn right(&self) -> &T {
        &self.right
    }

    /// Half-open coordinate range outside of which the tails apply.
    pub fn span(&self) -> (i64, i64) {
        (self.start, self.start + self.explicit.len() as i64)
    }

    pub fn map<U: Clone + Eq>(&self, f: impl Fn(&T) -> U) -> Profile<U> {
        Profile::new(self.start, self.explicit.iter().map(&f).collect(), f(&self.left), f(&self.right))
    }

    pub fn zip_with<U: Clone + Eq, V: Clone + Eq>(&self, other: &Profile<U>, f: impl Fn(&T, &U) -> V) -> Profile<V> {
        let (a0, a1) = self.span();
        let (b0, b1) = other.span();
        let lo = a0.min(b0);
        let hi = a1.max(b1);
        let explicit = (lo..hi).map(|i| f(self.get(i), other.get(i))).collect();
        Profile::new(lo, explicit, f(&self.left, &other.left), f(&self.right, &other.right))
    }

    /// Every coordinate satisfies `pred`, including both tails.
    pub fn all(&self, pred: impl Fn(&T) -> bool) -> bool {
        pred(&self.left) && pred(&self.right) && self.explicit.iter().all(pred)
    }

    /// The first coordinate (checked over the explicit block and the tail
    /// boundaries) at which `pred` fails, if any.
    pub fn find_failure(&self, pred: impl Fn(&T) -> bool) -> Option<i64> {
        let (lo, hi) = self.span();
        if !pred(&self.left) {
            return Some(lo - 1);
        }
        if let Some(i) = (lo..hi).find(|&i| !pred(self.get(i))) {
            return Some(i);
        }
        if !pred(&self.right) {
            return Some(hi);
        }
        None
    }
}

/// `τᵏ`: the coordinate at `i` of the result is the coordinate at `i + k`.
pub fn shift_apply<T: Clone + Eq>(profile: &Profile<T>, k: i64) -> Profile<T> {
    Profile::new(profile.start - k, profile.explicit.clone(), profile.left.clone(), profile.right.clone())
}

/// The eventually constant part of L^ℤ under coordinatewise multiplication.
/// It contains every element needed here and is invariant under the shift.
#[derive(Clone, Debug)]
pub struct ShiftGroup {
    pub symbols: FiniteGroup,
}

impl ShiftGroup {
    pub fn new(symbols: FiniteGroup) -> Self {
        Self { symbols }
    }

    /// `g` at coordinate `i`, identity elsewhere.
    pub fn single(&self, i: i64, g: usize) -> Profile<usize> {
        let e = self.symbols.identity_index();
        Profile::new(i, vec![g], e, e)
    }
}

impl Group for ShiftGroup {
    type Elem = Profile<usize>;

    fn identity(&self) -> Profile<usize> {
        Profile::constant(self.symbols.identity_index())
    }

    fn op(&self, a: &Profile<usize>, b: &Profile<usize>) -> Profile<usize> {
        a.zip_with(b, |x, y| self.symbols.op(x, y))
    }

    fn inverse(&self, a: &Profile<usize>) -> Profile<usize> {
        a.map(|x| self.symbols.inverse(x))
    }

    fn label(&self, a: &Profile<usize>) -> String {
        let l = |x: &usize| self.symbols.element_label(*x).to_string();
        let body: Vec<String> = a.explicit.iter().map(l).collect();
        format!("[..{} | {}@{} | {}..]", l(&a.left), body.join(","), a.start, l(&a.right))
    }
}

/// The left shift τ((gᵢ)) = (gᵢ₊₁).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shift;

impl Automorphism<ShiftGroup> for Shift {
    fn apply_pow(&self, _group: &ShiftGroup, x: &Profile<usize>, n: i64) -> Profile<usize> {
        shift_apply(x, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn m_profile() -> Profile<BTreeSet<usize>> {
        let full: BTreeSet<usize> = [0, 1].into();
        let trivial: BTreeSet<usize> = [0].into();
        Profile::step(1, full, trivial)
    }

    #[test]
    fn canonical_form_is_structural() {
        let a = Profile::new(-3, vec![0, 0, 5, 1, 1], 0, 1);
        let b = Profile::new(-1, vec![5], 0, 1);
        assert_eq!(a, b);
        assert_eq!(Profile::new(4, vec![2, 2], 2, 2), Profile::constant(2));
    }

    #[test]
    fn shift_translates_indices() {
        let p = Profile::new(0, vec![1, 2, 3], 0, 0);
        let q = shift_apply(&p, 1);
        for i in -5..5 {
            assert_eq!(q.get(i), p.get(i + 1));
        }
        assert_eq!(shift_apply(&p, 0), p);
        assert_eq!(shift_apply(&shift_apply(&p, 3), -3), p);
        assert_eq!(shift_apply(&Profile::constant(7), 11), Profile::constant(7));
    }

    #[test]
    fn m_profile_shifts_into_itself() {
        let m = m_profile();
        let tm = shift_apply(&m, 1);
        assert_eq!(tm.get(-1), m.get(-5));
        assert_eq!(tm.get(0), &BTreeSet::from([0]));
        let contained = tm.zip_with(&m, |a, b| a.is_subset(b));
        assert!(contained.all(|x| *x));
        assert_ne!(tm, m);
        assert_eq!(shift_apply(&m, -1).find_failure(|s| s.len() == 1), Some(1));
    }

    #[test]
    fn shift_group_axioms_on_samples() {
        let g = ShiftGroup::new(FiniteGroup::symmetric(3));
        let samples =
            [g.identity(), g.single(0, 1), g.single(-2, 3), Profile::new(1, vec![2, 4], 1, 5), Profile::step(0, 3, 0)];
        for a in &samples {
            assert_eq!(g.op(a, &g.inverse(a)), g.identity());
            for b in &samples {
                for c in &samples {
                    assert_eq!(g.op(&g.op(a, b), c), g.op(a, &g.op(b, c)));
                }
                assert_eq!(shift_apply(&g.op(a, b), 2), g.op(&shift_apply(a, 2), &shift_apply(b, 2)));
            }
        }
    }
}
