use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::Group;
use crate::error::{Error, Result};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    labels: Vec<String>,
}

const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;

impl FiniteGroup {
    /// Validates a multiplication table (`table[a][b] = a·b`).
    ///
    /// Associativity is checked exhaustively up to order 64.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table must be n×n with entries < n".into()));
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = vec![0; n];
        for (a, inv) in inverse.iter_mut().enumerate() {
            *inv = (0..n)
                .find(|&b| at(a, b) == identity && at(b, a) == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(Error::InvalidGroup(format!("associativity fails for ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        Ok(Self {
            name: name.into(),
            order: n,
            table: flat,
            inverse,
            identity,
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    fn with_labels(mut self, labels: Vec<String>) -> Self {
        debug_assert_eq!(labels.len(), self.order);
        self.labels = labels;
        self
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z{n}"), table).expect("cyclic table is a group")
    }

    pub fn direct_product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order, b.order);
        let idx = |x: usize, y: usize| x * nb + y;
        let mut table = vec![vec![0; na * nb]; na * nb];
        for x1 in 0..na {
            for y1 in 0..nb {
                for x2 in 0..na {
                    for y2 in 0..nb {
                        table[idx(x1, y1)][idx(x2, y2)] = idx(a.op(&x1, &x2), b.op(&y1, &y2));
                    }
                }
            }
        }
        let labels = (0..na * nb).map(|i| format!("({},{})", a.labels[i / nb], b.labels[i % nb])).collect();
        Self::from_table(format!("{}x{}", a.name, b.name), table)
            .expect("product of groups is a group")
            .with_labels(labels)
    }

    /// The group generated by permutations of `0..m` (composition `(p∘q)(i) = p[q[i]]`).
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self> {
        let m = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut sorted = g.clone();
            sorted.sort_unstable();
            if g.len() != m || sorted != (0..m).collect::<Vec<_>>() {
                return Err(Error::InvalidGroup("generators must be permutations of 0..m".into()));
            }
        }
        let id: Vec<usize> = (0..m).collect();
        let compose = |p: &[usize], q: &[usize]| q.iter().map(|&i| p[i]).collect::<Vec<_>>();
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in gens {
                let q = compose(&p, g);
                if seen.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let index: BTreeMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let table = elems.iter().map(|p| elems.iter().map(|q| index[&compose(p, q)]).collect()).collect();
        let labels = elems.iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("")).collect();
        Ok(Self::from_table(name, table)?.with_labels(labels))
    }

    /// Dihedral group of order `2n` (`n ≥ 3`), acting on the vertices of an n-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3, "dihedral group needs n >= 3");
        let r: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(format!("D{n}"), &[r, s]).expect("valid permutations")
    }

    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return Self::cyclic(1);
        }
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        Self::from_permutations(format!("S{n}"), &[cycle, swap]).expect("valid permutations")
    }

    /// Alternating group, generated by the 3-cycles `(0 1 k)`.
    pub fn alternating(n: usize) -> Self {
        assert!(n >= 3);
        let gens: Vec<Vec<usize>> = (2..n)
            .map(|k| {
                let mut p: Vec<usize> = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        Self::from_permutations(format!("A{n}"), &gens).expect("valid permutations")
    }

    /// Quaternion group {±1, ±i, ±j, ±k}; index = 4·sign + unit.
    pub fn quaternion() -> Self {
        // unit products: (sign, unit) of u·v for u, v in {1, i, j, k}
        const UNIT: [[(usize, usize); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let table = (0..8)
            .map(|a: usize| {
                (0..8)
                    .map(|b: usize| {
                        let (s, u) = UNIT[a % 4][b % 4];
                        4 * ((a / 4 + b / 4 + s) % 2) + u
                    })
                    .collect()
            })
            .collect();
        let labels = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"].iter().map(|s| s.to_string()).collect();
        Self::from_table("Q8", table).expect("quaternion table").with_labels(labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn element_label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn conjugate(&self, x: usize, k: usize) -> usize {
        self.op(&self.op(&x, &k), &self.inverse[x])
    }

    pub fn generated_subgroup(&self, gens: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = BTreeSet::from([self.identity]);
        let mut queue = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in &gens {
                let b = self.op(&a, &g);
                if set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, set: &BTreeSet<usize>) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&a| set.contains(&self.inverse[a]) && set.iter().all(|b| set.contains(&self.op(&a, b))))
    }

    /// `x·H·x⁻¹` as a set.
    pub fn conjugate_set(&self, x: usize, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().map(|&k| self.conjugate(x, k)).collect()
    }

    pub fn is_normal(&self, set: &BTreeSet<usize>) -> bool {
        self.elements().all(|x| self.conjugate_set(x, set) == *set)
    }

    /// Left cosets `gH`, each sorted, listed by smallest representative.
    pub fn left_cosets(&self, subgroup: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order];
        let mut cosets = Vec::new();
        for g in self.elements() {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = subgroup.iter().map(|h| self.op(&g, h)).collect();
            coset.sort_unstable();
            for &c in &coset {
                assigned[c] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    /// All subgroups, found by closing cyclic subgroups under joins.
    pub fn subgroups(&self) -> Vec<BTreeSet<usize>> {
        let mut all: BTreeSet<BTreeSet<usize>> = self.elements().map(|g| self.generated_subgroup([g])).collect();
        loop {
            let current: Vec<BTreeSet<usize>> = all.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    if a.is_subset(b) || b.is_subset(a) {
                        continue;
                    }
                    let join = self.generated_subgroup(a.iter().chain(b.iter()).copied());
                    grew |= all.insert(join);
                }
            }
            if !grew {
                break;
            }
        }
        let mut out: Vec<BTreeSet<usize>> = all.into_iter().collect();
        out.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
        out
    }

    pub fn normal_subgroups(&self) -> Vec<BTreeSet<usize>> {
        self.subgroups().into_iter().filter(|h| self.is_normal(h)).collect()
    }

    /// Quotient by a normal subgroup, with the projection as an index map.
    pub fn quotient(&self, normal: &BTreeSet<usize>) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(normal) || !self.is_normal(normal) {
            return Err(Error::NotInvariant("quotient needs a normal subgroup".into()));
        }
        let cosets = self.left_cosets(normal);
        let mut proj = vec![0; self.order];
        for (ci, coset) in cosets.iter().enumerate() {
            for &g in coset {
                proj[g] = ci;
            }
        }
        let table = cosets.iter().map(|a| cosets.iter().map(|b| proj[self.op(&a[0], &b[0])]).collect()).collect();
        let labels = cosets.iter().map(|c| format!("{}N", self.labels[c[0]])).collect();
        let q = Self::from_table(format!("{}/N", self.name), table)?.with_labels(labels);
        Ok((q, proj))
    }

    /// Subgroup re-indexed as a group of its own, with the embedding map.
    pub fn subgroup_as_group(&self, subgroup: &BTreeSet<usize>) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(subgroup) {
            return Err(Error::InvalidInput("not a subgroup".into()));
        }
        let elems: Vec<usize> = subgroup.iter().copied().collect();
        let pos: BTreeMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = elems.iter().map(|a| elems.iter().map(|b| pos[&self.op(a, b)]).collect()).collect();
        let labels = elems.iter().map(|&g| self.labels[g].clone()).collect();
        let h = Self::from_table(format!("H<{}", self.name), table)?.with_labels(labels);
        Ok((h, elems))
    }

    /// Checks that `map` is an injective homomorphism `self → target`.
    pub fn is_embedding(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        map.len() == self.order
            && map.iter().collect::<BTreeSet<_>>().len() == self.order
            && self.elements().all(|a| self.elements().all(|b| map[self.op(&a, &b)] == target.op(&map[a], &map[b])))
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn op(&self, a: &usize, b: &usize) -> usize {
        self.table[a * self.order + b]
    }

    fn inverse(&self, a: &usize) -> usize {
        self.inverse[*a]
    }

    fn label(&self, a: &usize) -> String {
        self.labels[*a].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zoo() -> Vec<FiniteGroup> {
        vec![
            FiniteGroup::cyclic(1),
            FiniteGroup::cyclic(7),
            FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
            FiniteGroup::dihedral(4),
            FiniteGroup::symmetric(3),
            FiniteGroup::symmetric(4),
            FiniteGroup::alternating(4),
            FiniteGroup::quaternion(),
        ]
    }

    #[test]
    fn group_orders() {
        let orders: Vec<usize> = zoo().iter().map(FiniteGroup::order).collect();
        assert_eq!(orders, vec![1, 7, 8, 8, 6, 24, 12, 8]);
    }

    #[test]
    fn axioms_hold_exhaustively() {
        for g in zoo() {
            // from_table re-validates identity, inverses and associativity
            let rebuilt = FiniteGroup::from_table(g.name(), g.table()).unwrap();
            assert_eq!(rebuilt.identity_index(), g.identity_index());
            for a in g.elements() {
                assert_eq!(g.op(&a, &g.inverse(&a)), g.identity());
            }
        }
    }

    #[test]
    fn rejects_non_associative_table() {
        // a Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table("bad", t), Err(Error::InvalidGroup(_))));
        assert!(FiniteGroup::from_table("bad", vec![vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion();
        let (i, j, k, m1) = (1, 2, 3, 4);
        assert_eq!(q.op(&i, &j), k);
        assert_eq!(q.op(&j, &i), 7);
        assert_eq!(q.op(&i, &i), m1);
        assert_eq!(q.normal_subgroups().len(), 6);
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::symmetric(3).subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(4).subgroups().len(), 30);
        assert_eq!(FiniteGroup::symmetric(4).normal_subgroups().len(), 4);
        assert_eq!(FiniteGroup::dihedral(4).subgroups().len(), 10);
    }

    #[test]
    fn quotient_of_s3_by_a3_is_z2() {
        let s3 = FiniteGroup::symmetric(3);
        let a3 = s3.normal_subgroups().into_iter().find(|h| h.len() == 3).unwrap();
        let (q, proj) = s3.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        for a in s3.elements() {
            for b in s3.elements() {
                assert_eq!(proj[s3.op(&a, &b)], q.op(&proj[a], &proj[b]));
            }
        }
        let not_normal = s3.generated_subgroup([1]);
        if !s3.is_normal(&not_normal) {
            assert!(s3.quotient(&not_normal).is_err());
        }
    }

    #[test]
    fn subgroup_embedding_is_homomorphism() {
        let d4 = FiniteGroup::dihedral(4);
        for h in d4.subgroups() {
            let (hg, emb) = d4.subgroup_as_group(&h).unwrap();
            assert!(hg.is_embedding(&d4, &emb));
        }
    }
}
