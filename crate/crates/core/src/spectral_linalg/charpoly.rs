use std::ops::Neg;

use num_traits::Num;

use super::{IntPolynomial, Polynomial, RatPolynomial};
use crate::matrix::{IntMatrix, Matrix, RatMatrix};

/// `det(xI − m)` by Berkowitz's division-free algorithm.
pub fn char_poly<T: Clone + Num + Neg<Output = T>>(m: &Matrix<T>) -> Polynomial<T> {
    assert!(m.is_square(), "characteristic polynomial of a non-square matrix");
    let rows = m.to_rows();
    // highest-degree-first coefficient vector
    let mut v = berkowitz(&rows);
    v.reverse();
    Polynomial::new(v)
}

pub fn char_poly_int(m: &IntMatrix) -> IntPolynomial {
    char_poly(m)
}

pub fn char_poly_rat(m: &RatMatrix) -> RatPolynomial {
    char_poly(m)
}

fn berkowitz<T: Clone + Num + Neg<Output = T>>(m: &[Vec<T>]) -> Vec<T> {
    let n = m.len();
    match n {
        0 => return vec![T::one()],
        1 => return vec![T::one(), -m[0][0].clone()],
        _ => {}
    }
    let a = m[0][0].clone();
    let r: Vec<T> = m[0][1..].to_vec();
    let sub: Vec<Vec<T>> = m[1..].iter().map(|row| row[1..].to_vec()).collect();
    let mut col: Vec<T> = m[1..].iter().map(|row| row[0].clone()).collect();

    // diagonal entries of the Toeplitz matrix: 1, −a, −R C, −R A C, −R A² C, …
    let mut diags = vec![T::one(), -a];
    for i in 0..n - 1 {
        let rc = r.iter().zip(&col).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
        diags.push(-rc);
        if i + 1 < n - 1 {
            col = sub
                .iter()
                .map(|row| row.iter().zip(&col).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone()))
                .collect();
        }
    }
    let inner = berkowitz(&sub);
    (0..=n)
        .map(|i| (0..n).filter(|&j| j <= i).fold(T::zero(), |acc, j| acc + diags[i - j].clone() * inner[j].clone()))
        .collect()
}
