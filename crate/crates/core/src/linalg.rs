//! Fraction-free exact linear algebra over integral domains.
//!
//! Everything here works over `Q` and over the polynomial ring `Q[λ]`; the
//! latter is how ranks and kernels over the fraction field `Q(λ)` are
//! computed without ever forming a rational function.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::Q;

/// Integral domain with exact division.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / other`; the caller guarantees the division is exact.
    fn div_exact(&self, other: &Self) -> Self;
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        self / other
    }
}

impl Scalar for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn div_exact(&self, other: &Self) -> Self {
        Poly::div_exact(self, other).expect("fraction-free step must divide exactly")
    }
}

pub type Matrix<S> = Vec<Vec<S>>;

/// Fraction-free reduced row echelon form: every pivot equals `denom` and
/// every other entry is a minor of the input, so the row space over the
/// fraction field is spanned by `rows`.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub rows: Matrix<S>,
    pub pivots: Vec<usize>,
    pub denom: S,
    pub ncols: usize,
}

impl<S: Scalar> Echelon<S> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Kernel basis over the fraction field, one vector per free column,
    /// with the free coordinate equal to `denom`.
    pub fn kernel(&self) -> Matrix<S> {
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains(&f) {
                continue;
            }
            let mut v = vec![S::zero(); self.ncols];
            v[f] = self.denom.clone();
            for (r, &p) in self.pivots.iter().enumerate() {
                v[p] = self.rows[r][f].neg();
            }
            out.push(v);
        }
        out
    }
}

pub fn ff_rref<S: Scalar>(mat: &[Vec<S>], ncols: usize) -> Echelon<S> {
    let mut a: Matrix<S> = mat.to_vec();
    let nrows = a.len();
    let mut prev = S::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let piv = a[r][col].clone();
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[col].clone();
            for c in 0..ncols {
                let v = piv.mul(&row[c]).sub(&factor.mul(&pivot_row[c]));
                row[c] = v.div_exact(&prev);
            }
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        rows: a,
        pivots,
        denom: prev,
        ncols,
    }
}

pub fn rank<S: Scalar>(mat: &[Vec<S>], ncols: usize) -> usize {
    ff_rref(mat, ncols).rank()
}

/// Kernel of `mat` (as a map on column vectors) over the fraction field.
pub fn kernel<S: Scalar>(mat: &[Vec<S>], ncols: usize) -> Matrix<S> {
    ff_rref(mat, ncols).kernel()
}

/// Determinant by Bareiss elimination.
pub fn det<S: Scalar>(mat: &[Vec<S>]) -> S {
    let n = mat.len();
    if n == 0 {
        return S::one();
    }
    let mut a = mat.to_vec();
    let mut prev = S::one();
    let mut sign_flip = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return S::zero();
            };
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

/// Pfaffian of a skew-symmetric matrix by the perfect-matching expansion
/// along the first remaining index.
pub fn pfaffian<S: Scalar>(mat: &[Vec<S>]) -> S {
    let idx: Vec<usize> = (0..mat.len()).collect();
    pfaffian_on(mat, &idx)
}

fn pfaffian_on<S: Scalar>(mat: &[Vec<S>], idx: &[usize]) -> S {
    if idx.is_empty() {
        return S::one();
    }
    if idx.len() % 2 == 1 {
        return S::zero();
    }
    let first = idx[0];
    let mut acc = S::zero();
    for pos in 1..idx.len() {
        let entry = &mat[first][idx[pos]];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..]
            .iter()
            .enumerate()
            .filter(|&(p, _)| p + 1 != pos)
            .map(|(_, &i)| i)
            .collect();
        let term = entry.mul(&pfaffian_on(mat, &rest));
        acc = if pos % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// Square submatrix on the given index set.
pub fn submatrix<S: Scalar>(mat: &[Vec<S>], idx: &[usize]) -> Matrix<S> {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| mat[i][j].clone()).collect())
        .collect()
}

pub fn mat_vec<S: Scalar>(mat: &[Vec<S>], v: &[S]) -> Vec<S> {
    mat.iter()
        .map(|row| row.iter().zip(v).fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
        .collect()
}

/// True when `v` lies in the span of `basis` over the fraction field.
pub fn in_span<S: Scalar>(basis: &[Vec<S>], v: &[S], ncols: usize) -> bool {
    let r = rank(basis, ncols);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank(&ext, ncols) == r
}

/// Canonical RREF over `Q` (pivots normalized to one).
pub fn rref_q(mat: &[Vec<Q>], ncols: usize) -> (Matrix<Q>, Vec<usize>) {
    let e = ff_rref(mat, ncols);
    let rows = e
        .rows
        .iter()
        .map(|row| row.iter().map(|x| x / &e.denom).collect())
        .collect();
    (rows, e.pivots)
}
