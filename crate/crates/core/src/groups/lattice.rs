//! Integer lattices in canonical (row Hermite) form, Smith normal form and
//! integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

type Rows = Vec<Vec<BigInt>>;

fn to_big(rows: &[Vec<i64>]) -> Rows {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Overflow(format!("lattice entry {x}")))).collect()
}

/// Row-style Hermite normal form with a unimodular transform `u` such that
/// `u · rows = h`. Zero rows of `h` are kept at the bottom.
pub fn hnf_with_transform(rows: &Rows, cols: usize) -> (Rows, Rows) {
    let m = rows.len();
    let mut h = rows.clone();
    let mut u: Rows =
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        loop {
            // pivot = smallest nonzero |entry| in column c at or below row r
            let pivot = (r..m).filter(|&i| !h[i][c].is_zero()).min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = h[i][c].div_floor(&h[r][c]);
                for j in 0..cols {
                    let t = &h[r][j] * &q;
                    h[i][j] -= t;
                }
                for j in 0..m {
                    let t = &u[r][j] * &q;
                    u[i][j] -= t;
                }
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !h[r][c].is_zero() {
            if h[r][c].is_negative() {
                for x in h[r].iter_mut() {
                    *x = -&*x;
                }
                for x in u[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = h[i][c].div_floor(&h[r][c]);
                if q.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let t = &h[r][j] * &q;
                    h[i][j] -= t;
                }
                for j in 0..m {
                    let t = &u[r][j] * &q;
                    u[i][j] -= t;
                }
            }
            r += 1;
        }
    }
    (h, u)
}

/// Integer left kernel: generators of `{c ∈ ℤ^m : c · rows = 0}`.
pub fn left_kernel(rows: &Rows, cols: usize) -> Rows {
    let (h, u) = hnf_with_transform(rows, cols);
    h.iter().zip(u).filter(|(hr, _)| hr.iter().all(Zero::is_zero)).map(|(_, ur)| ur).collect()
}

/// Smith normal form `u · a · v = d` with unimodular `u`, `v`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.to_rows();
    let mut u = IntMatrix::identity(m).to_rows();
    let mut v = IntMatrix::identity(n).to_rows();
    let row_op = |mat: &mut Rows, dst: usize, src: usize, q: &BigInt| {
        let len = mat[dst].len();
        for j in 0..len {
            let t = &mat[src][j] * q;
            mat[dst][j] -= t;
        }
    };
    // column ops on d and v act on columns
    let col_op = |mat: &mut Rows, dst: usize, src: usize, q: &BigInt| {
        for row in mat.iter_mut() {
            let t = &row[src] * q;
            row[dst] -= t;
        }
    };
    let col_swap = |mat: &mut Rows, a: usize, b: usize| {
        for row in mat.iter_mut() {
            row.swap(a, b);
        }
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry in the lower-right block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        col_swap(&mut d, t, pj);
        col_swap(&mut v, t, pj);
        let mut clean = true;
        for i in t + 1..m {
            if d[i][t].is_zero() {
                continue;
            }
            let q = d[i][t].div_floor(&d[t][t]);
            row_op(&mut d, i, t, &q);
            row_op(&mut u, i, t, &q);
            clean &= d[i][t].is_zero();
        }
        for j in t + 1..n {
            if d[t][j].is_zero() {
                continue;
            }
            let q = d[t][j].div_floor(&d[t][t]);
            col_op(&mut d, j, t, &q);
            col_op(&mut v, j, t, &q);
            clean &= d[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: pivot must divide the remaining block
        let bad =
            (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
        if let Some((i, _)) = bad {
            // add row i to row t and redo this pivot
            let minus_one = -BigInt::one();
            row_op(&mut d, t, i, &minus_one);
            row_op(&mut u, t, i, &minus_one);
            continue;
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diagonal = (0..m.min(n)).map(|i| d[i][i].clone()).take_while(|x| !x.is_zero()).collect();
    Smith { diagonal, u: IntMatrix::from_rows(u).expect("square"), v: IntMatrix::from_rows(v).expect("square") }
}

/// A sublattice of ℤ^d stored as its row Hermite normal form, so equal
/// lattices compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[Vec<i64>]) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.len() != dim) {
            return Err(Error::Dimension { expected: dim, got: g.len() });
        }
        Self::from_big_generators(dim, &to_big(gens))
    }

    fn from_big_generators(dim: usize, gens: &Rows) -> Result<Self> {
        let (h, _) = hnf_with_transform(gens, dim);
        let basis =
            h.iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(|r| to_i64(r)).collect::<Result<Vec<_>>>()?;
        Ok(Self { dim, basis })
    }

    pub fn full(dim: usize) -> Self {
        let basis = (0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect();
        Self { dim, basis }
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, basis: Vec::new() }
    }

    /// `k·ℤ^d`.
    pub fn scaled_full(dim: usize, k: i64) -> Self {
        let gens: Vec<Vec<i64>> = (0..dim).map(|i| (0..dim).map(|j| if i == j { k } else { 0 }).collect()).collect();
        Self::from_generators(dim, &gens).expect("dims agree")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        let mut w: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for row in &self.basis {
            let p = row.iter().position(|&x| x != 0).expect("nonzero basis row");
            let a = i128::from(row[p]);
            if w[p] % a != 0 {
                return false;
            }
            let q = w[p] / a;
            for (wj, &rj) in w.iter_mut().zip(row) {
                *wj -= q * i128::from(rj);
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// Smallest `e > 0` with `e·ℤ^d ⊆ Λ` (exponent of the annihilated finite group).
    pub fn exponent(&self) -> Option<u64> {
        if !self.is_full_rank() {
            return None;
        }
        let m = IntMatrix::from_i64_rows(&self.basis).expect("rectangular");
        smith_normal_form(&m).diagonal.last().and_then(ToPrimitive::to_u64)
    }

    /// `[ℤ^d : Λ]` for full-rank lattices.
    pub fn index(&self) -> Option<BigInt> {
        self.is_full_rank().then(|| self.basis.iter().enumerate().map(|(i, r)| BigInt::from(r[i])).product())
    }

    /// `{M v : v ∈ Λ}` for a `d'×d` integer matrix.
    pub fn image(&self, m: &IntMatrix) -> Result<Self> {
        if m.cols() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: m.cols() });
        }
        let gens: Rows =
            self.basis.iter().map(|r| m.mul_vec(&r.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())).collect();
        Self::from_big_generators(m.rows(), &gens)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        let r1 = self.rank();
        let mut stacked = to_big(&self.basis);
        stacked.extend(to_big(&other.basis).into_iter().map(|r| r.into_iter().map(|x| -x).collect()));
        let kernel = left_kernel(&stacked, self.dim);
        let b1 = to_big(&self.basis);
        let gens: Rows =
            kernel.iter().map(|c| (0..self.dim).map(|j| (0..r1).map(|i| &c[i] * &b1[i][j]).sum()).collect()).collect();
        Self::from_big_generators(self.dim, &gens)
    }

    /// `{v ∈ ℤ^{d'} : M v ∈ Λ}` for a `d×d'` integer matrix.
    pub fn preimage(&self, m: &IntMatrix) -> Result<Self> {
        if m.rows() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: m.rows() });
        }
        let dp = m.cols();
        // rows: columns of M (as vᵀMᵀ) followed by -basis; kernel coefficients
        let mut stacked: Rows = m.transpose().to_rows();
        stacked.extend(to_big(&self.basis).into_iter().map(|r| r.into_iter().map(|x| -x).collect()));
        let kernel = left_kernel(&stacked, self.dim);
        let gens: Rows = kernel.into_iter().map(|c| c[..dp].to_vec()).collect();
        Self::from_big_generators(dp, &gens)
    }

    pub fn is_sublattice_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64_rows(&self.basis).expect("rectangular")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_is_canonical() {
        let a = Lattice::from_generators(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        let b = Lattice::from_generators(2, &[vec![2, 2], vec![2, 0], vec![4, 6]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[vec![2, 0], vec![0, 2]]);
        assert_eq!(a.index(), Some(BigInt::from(4)));
        assert_eq!(a.exponent(), Some(2));
    }

    #[test]
    fn membership() {
        let l = Lattice::from_generators(2, &[vec![1, 1], vec![0, 3]]).unwrap();
        assert!(l.contains(&[2, 5]));
        assert!(!l.contains(&[1, 0]));
        assert!(Lattice::zero(2).contains(&[0, 0]));
        assert!(!Lattice::zero(2).contains(&[0, 1]));
    }

    #[test]
    fn smith_of_diagonal_needs_gcd_fix() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);
        let d = s.u.mul(&m).mul(&s.v);
        assert_eq!(d, IntMatrix::from_i64_rows(&[vec![1, 0], vec![0, 6]]).unwrap());
        assert!(s.u.det().abs().is_one() && s.v.det().abs().is_one());
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Lattice::scaled_full(2, 2);
        let b = Lattice::from_generators(2, &[vec![3, 0], vec![0, 1]]).unwrap();
        let i = a.intersection(&b).unwrap();
        assert_eq!(i, Lattice::from_generators(2, &[vec![6, 0], vec![0, 2]]).unwrap());
        let two = IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        let four = Lattice::scaled_full(2, 4);
        assert_eq!(four.preimage(&two).unwrap(), Lattice::scaled_full(2, 2));
        assert_eq!(a.preimage(&two).unwrap(), Lattice::full(2));
        assert_eq!(a.image(&two).unwrap(), four);
    }
}
