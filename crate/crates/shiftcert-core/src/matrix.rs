//! Symmetric matrices over an exact integral domain, fraction-free
//! determinants, and the exact positive-semidefiniteness decision.

use crate::poly::Poly;
use crate::rat::Rat;
use crate::upoly::{RatFn, UPoly};
use alloc::string::String;
use alloc::vec::Vec;
use num_traits::{One, Signed, Zero};

/// Commutative integral domain with the exact division needed by
/// fraction-free elimination.
pub trait Ring: Clone + PartialEq + core::fmt::Debug {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_add(&self, o: &Self) -> Self;
    fn ring_sub(&self, o: &Self) -> Self;
    fn ring_mul(&self, o: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    fn is_ring_zero(&self) -> bool;
    /// Exact quotient; panics when the division is not exact.
    fn ring_exact_div(&self, d: &Self) -> Self;
}

impl Ring for Rat {
    fn ring_zero() -> Self {
        Rat::zero()
    }
    fn ring_one() -> Self {
        Rat::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self + o
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn ring_neg(&self) -> Self {
        -self.clone()
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_exact_div(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero");
        self / d
    }
}

impl Ring for UPoly {
    fn ring_zero() -> Self {
        UPoly::zero()
    }
    fn ring_one() -> Self {
        UPoly::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_exact_div(&self, d: &Self) -> Self {
        self.exact_div(d).expect("inexact polynomial division")
    }
}

impl Ring for Poly {
    fn ring_zero() -> Self {
        Poly::zero()
    }
    fn ring_one() -> Self {
        Poly::one()
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_exact_div(&self, d: &Self) -> Self {
        self.exact_div(d).expect("inexact polynomial division")
    }
}

impl Ring for RatFn {
    fn ring_zero() -> Self {
        RatFn::constant(Rat::zero())
    }
    fn ring_one() -> Self {
        RatFn::constant(Rat::one())
    }
    fn ring_add(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn ring_sub(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn ring_mul(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
    fn is_ring_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_exact_div(&self, d: &Self) -> Self {
        self.div(d).expect("division by zero rational function")
    }
}

/// Symmetric matrix; only the upper triangle is stored, so symmetry holds
/// by construction.
#[derive(Clone, PartialEq, Debug)]
pub struct SymMatrix<T> {
    dim: usize,
    upper: Vec<T>,
}

impl<T: Ring> SymMatrix<T> {
    /// Builds from an entry function; only `(i, j)` with `i <= j` is
    /// queried.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(dim >= 1, "dimension must be >= 1");
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(f(i, j));
            }
        }
        SymMatrix { dim, upper }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.dim - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.upper[self.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let k = self.idx(i, j);
        self.upper[k] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Leading principal submatrix of order `k` (1-based size).
    pub fn leading(&self, k: usize) -> SymMatrix<T> {
        assert!(k >= 1 && k <= self.dim);
        SymMatrix::from_fn(k, |i, j| self.get(i, j).clone())
    }

    /// Principal submatrix with row/column `pos` removed (0-based).
    pub fn delete(&self, pos: usize) -> SymMatrix<T> {
        assert!(self.dim >= 2 && pos < self.dim);
        let map = |t: usize| if t < pos { t } else { t + 1 };
        SymMatrix::from_fn(self.dim - 1, |i, j| self.get(map(i), map(j)).clone())
    }

    pub fn map<U: Ring>(&self, mut f: impl FnMut(&T) -> U) -> SymMatrix<U> {
        SymMatrix {
            dim: self.dim,
            upper: self.upper.iter().map(|t| f(t)).collect(),
        }
    }

    /// Congruence `diag(d) * M * diag(d)`.
    pub fn congruence_diag(&self, d: &[T]) -> SymMatrix<T> {
        assert_eq!(d.len(), self.dim);
        SymMatrix::from_fn(self.dim, |i, j| {
            self.get(i, j).ring_mul(&d[i]).ring_mul(&d[j])
        })
    }
}

/// Fraction-free (Bareiss) determinant of a general square matrix given as
/// rows.  The empty matrix has determinant one.
pub fn det_rows<T: Ring>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::ring_one();
    }
    for row in &a {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    let mut prev = T::ring_one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_ring_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_ring_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return T::ring_zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = a[k][k]
                    .ring_mul(&a[i][j])
                    .ring_sub(&a[i][k].ring_mul(&a[k][j]));
                a[i][j] = t.ring_exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.ring_neg()
    } else {
        det
    }
}

/// Exact determinant via fraction-free elimination.
pub fn det_fraction_free<T: Ring>(m: &SymMatrix<T>) -> T {
    det_rows(m.to_rows())
}

/// Leading principal minors `det M[..j]` for `j = 1..=dim`.
pub fn principal_minors<T: Ring>(m: &SymMatrix<T>) -> Vec<T> {
    (1..=m.dim())
        .map(|k| det_fraction_free(&m.leading(k)))
        .collect()
}

/// Outcome of the exact PSD decision.
#[derive(Clone, Debug, PartialEq)]
pub enum PsdOutcome {
    /// PSD, with rank and the positive pivots of the symmetric elimination.
    Psd { rank: usize, pivots: Vec<Rat> },
    /// Not PSD: `witness' M witness = value < 0`, exactly.
    NotPsd { witness: Vec<Rat>, value: Rat },
}

impl PsdOutcome {
    pub fn is_psd(&self) -> bool {
        matches!(self, PsdOutcome::Psd { .. })
    }

    pub fn rank(&self) -> Option<usize> {
        match self {
            PsdOutcome::Psd { rank, .. } => Some(*rank),
            PsdOutcome::NotPsd { .. } => None,
        }
    }
}

/// Exact PSD decision by symmetric Gaussian elimination.
///
/// Zero diagonal pivots are handled directly: a PSD matrix with a zero
/// diagonal entry must have the whole row zero, so a nonzero off-diagonal
/// entry there yields an explicit negative witness.  The accumulated
/// congruence transform maps every witness back to the original basis.
pub fn psd_check(m: &SymMatrix<Rat>) -> PsdOutcome {
    let n = m.dim();
    let mut a = m.to_rows();
    // current = T * M * T'; witnesses are rows of T
    let mut t: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    let mut pivots = Vec::new();
    for k in 0..n {
        let d = a[k][k].clone();
        if d.is_positive() {
            // Schur complement of the pivot on the trailing block
            for i in k + 1..n {
                for j in i..n {
                    let delta = &a[i][k] * &a[k][j] / &d;
                    a[i][j] -= delta;
                    if i != j {
                        a[j][i] = a[i][j].clone();
                    }
                }
            }
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &d;
                for q in 0..n {
                    let s = &f * &t[k][q];
                    t[i][q] -= s;
                }
                a[i][k] = Rat::zero();
                a[k][i] = Rat::zero();
            }
            rank += 1;
            pivots.push(d);
            continue;
        }
        if d.is_negative() {
            return PsdOutcome::NotPsd {
                witness: t[k].clone(),
                value: d,
            };
        }
        // zero pivot: any nonzero off-diagonal entry in the remaining
        // block refutes PSD
        if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
            let mcross = a[k][j].clone();
            let c = a[j][j].clone();
            // v = s*e_k - e_j with s = (c+1)/(2m): v' A v = -1
            let s = (&c + Rat::one()) / (&mcross * Rat::from_integer(2.into()));
            let witness: Vec<Rat> = (0..n).map(|q| &s * &t[k][q] - &t[j][q]).collect();
            return PsdOutcome::NotPsd {
                witness,
                value: -Rat::one(),
            };
        }
        // zero row: rank unchanged, move on
    }
    PsdOutcome::Psd { rank, pivots }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SlackError {
    SubmatrixSingular(String),
    NotPositiveDefinite(String),
}

/// Largest `delta` such that `M - delta * E_pos` is still PSD, assuming `M`
/// is PSD and the principal submatrix omitting `pos` is positive definite:
/// the Schur-complement ratio `det M / det M_without_pos`.  `pos` is
/// 0-based.
pub fn max_diag_slack<T: Ring>(m: &SymMatrix<T>, pos: usize) -> Result<T, SlackError> {
    assert!(pos < m.dim());
    if m.dim() == 1 {
        return Ok(m.get(0, 0).clone());
    }
    let sub = m.delete(pos);
    let d_sub = det_fraction_free(&sub);
    if d_sub.is_ring_zero() {
        return Err(SlackError::SubmatrixSingular(String::from(
            "principal submatrix omitting pos is singular",
        )));
    }
    let d = det_fraction_free(m);
    Ok(d.ring_exact_div(&d_sub))
}

/// Positive-definiteness of a rational symmetric matrix, decided through
/// leading principal minors.
pub fn is_positive_definite(m: &SymMatrix<Rat>) -> bool {
    principal_minors(m).iter().all(|d| d.is_positive())
}
