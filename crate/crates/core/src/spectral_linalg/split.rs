use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::charpoly::char_poly_rat;
use super::cyclotomic::{cyclotomic, root_of_unity_orders};
use super::roots::{isolate_squarefree, CertifiedRoot, Interval};
use super::RatPolynomial;
use crate::error::{Error, Result};
use crate::groups::IntAutomorphism;
use crate::matrix::RatMatrix;

/// Maximum invariance residual accepted for computed subspaces.
pub const SUBSPACE_RESIDUAL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    Contracting,
    Neutral,
    Expanding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifiedRoot {
    pub root: CertifiedRoot,
    pub class: RootClass,
    /// Set when the root is a root of unity of this order.
    pub root_of_unity_order: Option<u64>,
}

/// Splitting of ℝ^d into generalized eigenspaces by eigenvalue modulus.
/// Each basis is stored as orthonormal columns.
#[derive(Clone, Debug)]
pub struct ContractionSplit {
    pub matrix: DMatrix<f64>,
    pub contracting: DMatrix<f64>,
    pub neutral: DMatrix<f64>,
    pub expanding: DMatrix<f64>,
    pub eigenvalues: Vec<ClassifiedRoot>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitSummary {
    pub contracting_dim: usize,
    pub neutral_dim: usize,
    pub expanding_dim: usize,
    pub eigenvalues: Vec<ClassifiedRoot>,
    pub residual: f64,
}

impl ContractionSplit {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn contracting_dim(&self) -> usize {
        self.contracting.ncols()
    }

    pub fn neutral_dim(&self) -> usize {
        self.neutral.ncols()
    }

    pub fn expanding_dim(&self) -> usize {
        self.expanding.ncols()
    }

    pub fn basis(&self, class: RootClass) -> &DMatrix<f64> {
        match class {
            RootClass::Contracting => &self.contracting,
            RootClass::Neutral => &self.neutral,
            RootClass::Expanding => &self.expanding,
        }
    }

    /// The matrix restricted to one of the invariant subspaces, in the
    /// coordinates of its orthonormal basis: `Bᵀ M B`.
    pub fn restricted(&self, class: RootClass) -> DMatrix<f64> {
        let b = self.basis(class);
        b.transpose() * &self.matrix * b
    }

    /// Largest contracting eigenvalue modulus.
    pub fn contraction_rate(&self) -> Option<Interval> {
        self.eigenvalues
            .iter()
            .filter(|r| r.class == RootClass::Contracting)
            .map(|r| r.root.modulus)
            .max_by(|a, b| a.hi.total_cmp(&b.hi))
    }

    pub fn summary(&self) -> SplitSummary {
        SplitSummary {
            contracting_dim: self.contracting_dim(),
            neutral_dim: self.neutral_dim(),
            expanding_dim: self.expanding_dim(),
            eigenvalues: self.eigenvalues.clone(),
            residual: self.residual,
        }
    }
}

fn eval_matrix_poly(coeffs: &[f64], m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    coeffs.iter().rev().fold(DMatrix::zeros(n, n), |acc, &c| &acc * m + DMatrix::identity(n, n) * c)
}

fn real_poly_from_roots(roots: &[(Complex64, usize)]) -> Vec<f64> {
    let mut p = vec![Complex64::new(1.0, 0.0)];
    for &(z, mult) in roots {
        for _ in 0..mult {
            let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
            for (i, &c) in p.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * z;
            }
            p = next;
        }
    }
    p.iter().map(|c| c.re).collect()
}

/// Orthonormal basis of the numerical kernel of `a`, of known dimension.
fn numeric_kernel(a: &DMatrix<f64>, dim: usize) -> DMatrix<f64> {
    let n = a.ncols();
    if dim == 0 {
        return DMatrix::zeros(n, 0);
    }
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let cols: Vec<DVector<f64>> = order[..dim].iter().map(|&i| v_t.row(i).transpose()).collect();
    DMatrix::from_columns(&cols)
}

fn orthonormalize(vectors: &[DVector<f64>], n: usize) -> DMatrix<f64> {
    if vectors.is_empty() {
        return DMatrix::zeros(n, 0);
    }
    DMatrix::from_columns(vectors).qr().q()
}

fn invariance_residual(m: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if b.ncols() == 0 {
        return 0.0;
    }
    let mb = m * b;
    (&mb - b * (b.transpose() * &mb)).amax()
}

/// Generalized eigenspace split by eigenvalue modulus. Roots of unity are
/// recognized exactly through cyclotomic factors; every other root must have
/// a certified modulus interval excluding 1, otherwise the split is reported
/// as indeterminate.
pub fn contraction_split(m: &RatMatrix) -> Result<ContractionSplit> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::InvalidInput("contraction split needs a nonempty square matrix".into()));
    }
    let d = m.rows();
    let f = char_poly_rat(m);
    if f.coeff(0).is_zero() {
        return Err(Error::InvalidInput("matrix is not invertible".into()));
    }
    let mf = m.to_f64();
    let mut eigenvalues = Vec::new();
    let mut neutral_poly = RatPolynomial::one();
    let mut contracting_roots = Vec::new();
    let mut expanding_roots = Vec::new();
    for (g, mult) in f.squarefree_decomposition() {
        let mut rest = g;
        for order in root_of_unity_orders(rest.degree().unwrap_or(0)) {
            let phi = cyclotomic(order).to_rational();
            let (q, r) = rest.divrem(&phi);
            if !r.is_zero() {
                continue;
            }
            rest = q;
            neutral_poly = &neutral_poly * &phi.pow(mult);
            for k in (1..=order).filter(|k| num_integer::gcd(*k, order) == 1) {
                let z = Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / order as f64);
                eigenvalues.push(ClassifiedRoot {
                    root: CertifiedRoot {
                        re: z.re,
                        im: z.im,
                        radius: 4.0 * f64::EPSILON,
                        modulus: Interval::new(1.0, 1.0),
                        multiplicity: mult,
                    },
                    class: RootClass::Neutral,
                    root_of_unity_order: Some(order),
                });
            }
        }
        if rest.is_constant() {
            continue;
        }
        for mut root in isolate_squarefree(&rest)? {
            root.multiplicity = mult;
            let class = if root.modulus.below(1.0) {
                contracting_roots.push((root.center(), mult));
                RootClass::Contracting
            } else if root.modulus.above(1.0) {
                expanding_roots.push((root.center(), mult));
                RootClass::Expanding
            } else {
                return Err(Error::Indeterminate(format!(
                    "eigenvalue modulus interval [{}, {}] meets 1 and the factor is not cyclotomic",
                    root.modulus.lo, root.modulus.hi
                )));
            };
            eigenvalues.push(ClassifiedRoot { root, class, root_of_unity_order: None });
        }
    }

    let dim_of = |roots: &[(Complex64, usize)]| roots.iter().map(|r| r.1).sum::<usize>();
    let contracting =
        numeric_kernel(&eval_matrix_poly(&real_poly_from_roots(&contracting_roots), &mf), dim_of(&contracting_roots));
    let expanding =
        numeric_kernel(&eval_matrix_poly(&real_poly_from_roots(&expanding_roots), &mf), dim_of(&expanding_roots));
    let neutral_exact = eval_rat_poly(&neutral_poly, m).null_space();
    let neutral_vecs: Vec<DVector<f64>> = neutral_exact
        .iter()
        .map(|v| DVector::from_iterator(d, v.iter().map(|x| x.to_f64().unwrap_or(f64::NAN))))
        .collect();
    let neutral = orthonormalize(&neutral_vecs, d);
    if contracting.ncols() + neutral.ncols() + expanding.ncols() != d {
        return Err(Error::Indeterminate("subspace dimensions do not add up".into()));
    }
    let residual = [&contracting, &neutral, &expanding].iter().map(|b| invariance_residual(&mf, b)).fold(0.0, f64::max);
    if residual > SUBSPACE_RESIDUAL {
        return Err(Error::Indeterminate(format!("invariant subspace residual {residual:e}")));
    }
    Ok(ContractionSplit { matrix: mf, contracting, neutral, expanding, eigenvalues, residual })
}

pub fn contraction_split_int(a: &IntAutomorphism) -> Result<ContractionSplit> {
    contraction_split(&a.matrix().to_rational())
}

fn eval_rat_poly(p: &RatPolynomial, m: &RatMatrix) -> RatMatrix {
    let n = m.rows();
    p.coeffs().iter().rev().fold(RatMatrix::zeros(n, n), |acc, c| {
        let mut next = acc.mul(m);
        for i in 0..n {
            let v = next.get(i, i) + c;
            next.set(i, i, v);
        }
        next
    })
}
