//! Rational nilpotent Lie algebras in a strong Malcev basis: bracket,
//! Baker–Campbell–Hausdorff group law, exponential coordinates of the first
//! and second kind, and the integrality check for `exp ZX_1 ··· exp ZX_n`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::rref_q;
use crate::{qi, Q};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("bracket [X{0}, X{0}] must vanish")]
    SelfBracket(usize),
    #[error("invalid algebra: {0}")]
    Invalid(String),
    #[error("factor directions do not form a chart: {0}")]
    BadChart(String),
}

/// Point of `n` or `n*` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorQ(pub Vec<Q>);

impl VectorQ {
    pub fn zeros(n: usize) -> Self {
        VectorQ(vec![Q::zero(); n])
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Q::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        VectorQ(xs.iter().map(|&x| qi(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &VectorQ) -> VectorQ {
        VectorQ(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &VectorQ) -> VectorQ {
        VectorQ(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> VectorQ {
        VectorQ(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Q) -> VectorQ {
        VectorQ(self.0.iter().map(|a| a * s).collect())
    }

    /// Componentwise product with a diagonal.
    pub fn hadamard(&self, diag: &[Q]) -> VectorQ {
        VectorQ(self.0.iter().zip(diag).map(|(a, b)| a * b).collect())
    }

    pub fn max_abs_diff(&self, other: &VectorQ) -> Q {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::to_f64).collect()
    }
}

impl fmt::Display for VectorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", items.join(", "))
    }
}

/// Sparse bracket table `[X_i, X_j] = Σ_k c_{ij}^k X_k`, stored for `i < j`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct StructureConstants {
    n: usize,
    table: BTreeMap<(usize, usize), BTreeMap<usize, Q>>,
}

impl StructureConstants {
    pub fn new(n: usize) -> Self {
        StructureConstants {
            n,
            table: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Add `c · X_k` to `[X_i, X_j]` (0-based; any order of `i`, `j`).
    pub fn add(&mut self, i: usize, j: usize, k: usize, c: Q) -> Result<(), AlgebraError> {
        for idx in [i, j, k] {
            if idx >= self.n {
                return Err(AlgebraError::IndexOutOfRange(idx));
            }
        }
        if c.is_zero() {
            return Ok(());
        }
        if i == j {
            return Err(AlgebraError::SelfBracket(i));
        }
        let (key, c) = if i < j { ((i, j), c) } else { ((j, i), -c) };
        let row = self.table.entry(key).or_default();
        let slot = row.entry(k).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            row.remove(&k);
        }
        if row.is_empty() {
            self.table.remove(&key);
        }
        Ok(())
    }

    /// `c_{ij}^k` with the antisymmetric extension.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Q {
        if i == j {
            return Q::zero();
        }
        let (key, sign) = if i < j { ((i, j), 1) } else { ((j, i), -1) };
        self.table
            .get(&key)
            .and_then(|row| row.get(&k))
            .map(|c| if sign < 0 { -c } else { c.clone() })
            .unwrap_or_else(Q::zero)
    }

    /// Nonzero `(i, j, k, c)` with `i < j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Q)> {
        self.table
            .iter()
            .flat_map(|(&(i, j), row)| row.iter().map(move |(&k, c)| (i, j, k, c)))
    }

    pub fn is_abelian(&self) -> bool {
        self.table.is_empty()
    }

    pub fn bracket(&self, x: &VectorQ, y: &VectorQ) -> VectorQ {
        let mut out = VectorQ::zeros(self.n);
        for (&(i, j), row) in &self.table {
            let w = &x.0[i] * &y.0[j] - &x.0[j] * &y.0[i];
            if w.is_zero() {
                continue;
            }
            for (&k, c) in row {
                out.0[k] += &w * c;
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// `(i, j, k)` with `c_{ij}^k ≠ 0` but `k ≥ min(i, j)`.
    pub triangularity_violations: Vec<(usize, usize, usize)>,
    /// Basis triples `i < j < k` where the Jacobi sum is nonzero.
    pub jacobi_violations: Vec<(usize, usize, usize)>,
    pub nilpotency_class: Option<usize>,
    /// Reduced basis of `[n, n]`.
    pub derived_basis: Vec<VectorQ>,
    /// True when `[n, n] = span{X_1..X_m}` with `m = derived_basis.len()`.
    pub derived_is_initial_segment: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.triangularity_violations.is_empty() && self.jacobi_violations.is_empty()
    }

    pub fn derived_dim(&self) -> usize {
        self.derived_basis.len()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        for &(i, j, k) in &self.triangularity_violations {
            parts.push(format!("triangularity violated at ({},{},{})", i + 1, j + 1, k + 1));
        }
        for &(i, j, k) in &self.jacobi_violations {
            parts.push(format!("Jacobi fails on ({},{},{})", i + 1, j + 1, k + 1));
        }
        if parts.is_empty() {
            "valid".to_string()
        } else {
            parts.join("; ")
        }
    }
}

fn span_rref(vectors: &[VectorQ], n: usize) -> Vec<VectorQ> {
    let rows: Vec<Vec<Q>> = vectors.iter().map(|v| v.0.clone()).collect();
    let (rref, _) = rref_q(&rows, n);
    rref.into_iter().map(VectorQ).collect()
}

pub fn validate_algebra(c: &StructureConstants) -> ValidationReport {
    let n = c.dim();
    let triangularity_violations: Vec<_> = c
        .entries()
        .filter(|&(i, j, k, _)| k >= i.min(j))
        .map(|(i, j, k, _)| (i, j, k))
        .collect();

    let basis: Vec<VectorQ> = (0..n).map(|i| VectorQ::basis(n, i)).collect();
    let mut jacobi_violations = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (&basis[i], &basis[j], &basis[k]);
                let s = c
                    .bracket(&c.bracket(x, y), z)
                    .add(&c.bracket(&c.bracket(y, z), x))
                    .add(&c.bracket(&c.bracket(z, x), y));
                if !s.is_zero() {
                    jacobi_violations.push((i, j, k));
                }
            }
        }
    }

    let brackets: Vec<VectorQ> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| c.bracket(&basis[i], &basis[j]))
        .collect();
    let derived_basis = span_rref(&brackets, n);
    let derived_is_initial_segment = derived_basis
        .iter()
        .enumerate()
        .all(|(r, v)| *v == VectorQ::basis(n, r));

    // lower central series n ⊃ [n,n] ⊃ [n,[n,n]] ⊃ ...
    let mut nilpotency_class = None;
    let mut term = basis.clone();
    for step in 1..=n + 1 {
        let next: Vec<VectorQ> = basis
            .iter()
            .flat_map(|x| term.iter().map(move |t| (x, t)))
            .map(|(x, t)| c.bracket(x, t))
            .collect();
        let next = span_rref(&next, n);
        if next.is_empty() {
            nilpotency_class = Some(step);
            break;
        }
        if next.len() == term.len() {
            break;
        }
        term = next;
    }
    if n == 0 {
        nilpotency_class = Some(1);
    }

    ValidationReport {
        triangularity_violations,
        jacobi_violations,
        nilpotency_class,
        derived_basis,
        derived_is_initial_segment,
    }
}

/// Right-normed bracket words with aggregated Dynkin coefficients.
type DynkinTerms = Vec<(Vec<bool>, Q)>;

fn factorial(k: usize) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * qi(i as i64))
}

fn dynkin_terms(class: usize) -> DynkinTerms {
    fn walk(class: usize, pairs: &mut Vec<(usize, usize)>, degree: usize, acc: &mut BTreeMap<Vec<bool>, Q>) {
        for total in 1..=class - degree {
            for r in 0..=total {
                let s = total - r;
                pairs.push((r, s));
                let d = degree + total;
                let word: Vec<bool> = pairs
                    .iter()
                    .flat_map(|&(r, s)| std::iter::repeat_n(false, r).chain(std::iter::repeat_n(true, s)))
                    .collect();
                let nonzero = word.len() == 1 || word[word.len() - 1] != word[word.len() - 2];
                if nonzero {
                    let count = pairs.len();
                    let mut denom = qi((count * d) as i64);
                    for &(r, s) in pairs.iter() {
                        denom *= factorial(r) * factorial(s);
                    }
                    let mut coeff = Q::one() / denom;
                    if count.is_multiple_of(2) {
                        coeff = -coeff;
                    }
                    *acc.entry(word).or_insert_with(Q::zero) += coeff;
                }
                walk(class, pairs, d, acc);
                pairs.pop();
            }
        }
    }
    let mut acc = BTreeMap::new();
    if class > 0 {
        walk(class, &mut Vec::new(), 0, &mut acc);
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A validated nilpotent Lie algebra with named basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    sc: StructureConstants,
    names: Vec<String>,
    class: usize,
    derived_dim: usize,
    derived_is_initial_segment: bool,
    dynkin: DynkinTerms,
}

impl LieAlgebra {
    pub fn new(sc: StructureConstants) -> Result<Self, AlgebraError> {
        let names = (1..=sc.dim()).map(|i| format!("X{i}")).collect();
        Self::with_names(sc, names)
    }

    pub fn with_names(sc: StructureConstants, names: Vec<String>) -> Result<Self, AlgebraError> {
        if names.len() != sc.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: sc.dim(),
                got: names.len(),
            });
        }
        let report = validate_algebra(&sc);
        if !report.is_valid() {
            return Err(AlgebraError::Invalid(report.summary()));
        }
        let class = report
            .nilpotency_class
            .ok_or_else(|| AlgebraError::Invalid("lower central series does not terminate".into()))?;
        Ok(LieAlgebra {
            dynkin: dynkin_terms(class),
            derived_dim: report.derived_dim(),
            derived_is_initial_segment: report.derived_is_initial_segment,
            sc,
            names,
            class,
        })
    }

    pub fn dim(&self) -> usize {
        self.sc.dim()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.sc
    }

    pub fn nilpotency_class(&self) -> usize {
        self.class
    }

    pub fn derived_dim(&self) -> usize {
        self.derived_dim
    }

    pub fn derived_is_initial_segment(&self) -> bool {
        self.derived_is_initial_segment
    }

    pub fn is_abelian(&self) -> bool {
        self.sc.is_abelian()
    }

    pub fn basis_vector(&self, i: usize) -> VectorQ {
        VectorQ::basis(self.dim(), i)
    }

    fn check_dim(&self, v: &VectorQ) -> Result<(), AlgebraError> {
        if v.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    pub fn bracket(&self, x: &VectorQ, y: &VectorQ) -> Result<VectorQ, AlgebraError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.sc.bracket(x, y))
    }

    /// `log(exp x · exp y)`; inputs must have length `dim()`.
    pub fn bch(&self, x: &VectorQ, y: &VectorQ) -> VectorQ {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(y.len(), self.dim());
        if self.class <= 1 {
            return x.add(y);
        }
        let mut memo: HashMap<Vec<bool>, VectorQ> = HashMap::new();
        let mut out = VectorQ::zeros(self.dim());
        for (word, coeff) in &self.dynkin {
            let v = self.nested(word, x, y, &mut memo);
            if !v.is_zero() {
                out = out.add(&v.scale(coeff));
            }
        }
        out
    }

    fn nested(&self, word: &[bool], x: &VectorQ, y: &VectorQ, memo: &mut HashMap<Vec<bool>, VectorQ>) -> VectorQ {
        let letter = |b: bool| if b { y.clone() } else { x.clone() };
        if word.len() == 1 {
            return letter(word[0]);
        }
        if let Some(v) = memo.get(word) {
            return v.clone();
        }
        let tail = self.nested(&word[1..], x, y, memo);
        let v = if tail.is_zero() {
            tail
        } else {
            self.sc.bracket(&letter(word[0]), &tail)
        };
        memo.insert(word.to_vec(), v.clone());
        v
    }

    pub fn bch_product(&self, x: &VectorQ, y: &VectorQ) -> Result<VectorQ, AlgebraError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bch(x, y))
    }

    /// Left-to-right product of first-kind elements.
    pub fn product(&self, factors: &[VectorQ]) -> VectorQ {
        factors
            .iter()
            .fold(VectorQ::zeros(self.dim()), |acc, f| self.bch(&acc, f))
    }

    /// Coordinates `t` with `exp t_1X_1 ··· exp t_nX_n = exp x`.
    pub fn second_from_first(&self, x: &VectorQ) -> Result<VectorQ, AlgebraError> {
        self.check_dim(x)?;
        let chart = ProductChart::second_kind(self.dim());
        Ok(VectorQ(chart.solve(self, x)?))
    }

    /// First-kind coordinates of `exp t_1X_1 ··· exp t_nX_n`.
    pub fn first_from_second(&self, t: &VectorQ) -> Result<VectorQ, AlgebraError> {
        self.check_dim(t)?;
        let chart = ProductChart::second_kind(self.dim());
        Ok(chart.compose(self, &t.0))
    }

    /// Diagonal map `X_k ↦ a_k X_k` applied to first-kind coordinates.
    pub fn diagonal_image(&self, a: &[Q], x: &VectorQ) -> VectorQ {
        x.hadamard(a)
    }

    /// Whether `exp ZX_1 ··· exp ZX_n` is closed under products and
    /// inverses, decided exactly from the integer-valuedness of the
    /// second-kind multiplication polynomials.
    pub fn lattice_closure_check(&self) -> bool {
        let n = self.dim();
        if n == 0 {
            return true;
        }
        let degree = self.weighted_degree_bound();
        let ok = |t: &VectorQ| t.0.iter().all(|x| x.is_integer());
        let mut closed = true;
        for_each_simplex_point(2 * n, degree, &mut |pt: &[u32]| {
            let s = VectorQ(pt[..n].iter().map(|&v| qi(v as i64)).collect());
            let t = VectorQ(pt[n..].iter().map(|&v| qi(v as i64)).collect());
            let prod = self.bch(
                &self.first_from_second(&s).expect("dim"),
                &self.first_from_second(&t).expect("dim"),
            );
            if !ok(&self.second_from_first(&prod).expect("dim")) {
                closed = false;
            }
            closed
        });
        if !closed {
            return false;
        }
        for_each_simplex_point(n, degree, &mut |pt: &[u32]| {
            let s = VectorQ(pt.iter().map(|&v| qi(v as i64)).collect());
            let inv = self.first_from_second(&s).expect("dim").neg();
            if !ok(&self.second_from_first(&inv).expect("dim")) {
                closed = false;
            }
            closed
        });
        closed
    }

    /// Bound on the total degree of the group-law polynomials: weights
    /// `w_k ≥ w_i + w_j` whenever `c_{ij}^k ≠ 0`, top-down from `X_n`.
    fn weighted_degree_bound(&self) -> u32 {
        let n = self.dim();
        let mut w = vec![1u32; n];
        for k in (0..n).rev() {
            for (i, j, kk, _) in self.sc.entries() {
                if kk == k {
                    w[k] = w[k].max(w[i] + w[j]);
                }
            }
        }
        w.into_iter().max().unwrap_or(1)
    }
}

/// Visit all `x ∈ N^m` with `Σ x ≤ degree`; an integer-valued polynomial of
/// total degree `≤ degree` is pinned down by its values there (Newton
/// basis of binomial products). Stops when the callback returns false.
fn for_each_simplex_point(m: usize, degree: u32, f: &mut dyn FnMut(&[u32]) -> bool) {
    fn rec(pt: &mut Vec<u32>, m: usize, left: u32, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if pt.len() == m {
            return f(pt);
        }
        for v in 0..=left {
            pt.push(v);
            let go = rec(pt, m, left - v, f);
            pt.pop();
            if !go {
                return false;
            }
        }
        true
    }
    rec(&mut Vec::with_capacity(m), m, degree, f);
}

/// Ordered product `exp(Σ u W) · exp(Σ u W) ···` of exponentials whose
/// directions have pairwise distinct leading indices covering `0..n`.
///
/// A direction with leading index `k` has coordinate `k` equal to one and
/// all coordinates above `k` zero. Solving is triangular: modulo the ideal
/// `n_{k-1}` the `k`-th direction is central, so the coefficient of index
/// `k` is read off once all higher coefficients are known.
#[derive(Clone, Debug)]
pub struct ProductChart {
    factors: Vec<Vec<(usize, VectorQ)>>,
    n: usize,
}

impl ProductChart {
    pub fn new(n: usize, factors: Vec<Vec<(usize, VectorQ)>>) -> Result<Self, AlgebraError> {
        let mut seen = vec![false; n];
        for (lead, dir) in factors.iter().flatten() {
            if *lead >= n || seen[*lead] {
                return Err(AlgebraError::BadChart(format!(
                    "leading index {lead} repeated or out of range"
                )));
            }
            seen[*lead] = true;
            if dir.len() != n || !dir.0[*lead].is_one() || dir.0[lead + 1..].iter().any(|x| !x.is_zero()) {
                return Err(AlgebraError::BadChart(format!(
                    "direction for index {lead} is not normalized"
                )));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(AlgebraError::BadChart("leading indices do not cover the basis".into()));
        }
        Ok(ProductChart { factors, n })
    }

    /// `exp t_1X_1 ··· exp t_nX_n`.
    pub fn second_kind(n: usize) -> Self {
        ProductChart {
            factors: (0..n).map(|i| vec![(i, VectorQ::basis(n, i))]).collect(),
            n,
        }
    }

    /// First-kind coordinates of the product for coefficients indexed by
    /// leading index.
    pub fn compose(&self, alg: &LieAlgebra, coeffs: &[Q]) -> VectorQ {
        let mut acc = VectorQ::zeros(self.n);
        for factor in &self.factors {
            let mut log = VectorQ::zeros(self.n);
            for (lead, dir) in factor {
                let c = &coeffs[*lead];
                if !c.is_zero() {
                    log = log.add(&dir.scale(c));
                }
            }
            if !log.is_zero() {
                acc = alg.bch(&acc, &log);
            }
        }
        acc
    }

    pub fn solve(&self, alg: &LieAlgebra, target: &VectorQ) -> Result<Vec<Q>, AlgebraError> {
        let mut coeffs = vec![Q::zero(); self.n];
        for k in (0..self.n).rev() {
            let partial = self.compose(alg, &coeffs);
            coeffs[k] = &target.0[k] - &partial.0[k];
        }
        if self.compose(alg, &coeffs) != *target {
            return Err(AlgebraError::BadChart(
                "triangular solve did not reproduce the target".into(),
            ));
        }
        Ok(coeffs)
    }
}

/// Group element stored by its logarithm, with cached second-kind
/// coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub first_kind: VectorQ,
    pub second_kind: VectorQ,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        GroupElement {
            first_kind: VectorQ::zeros(n),
            second_kind: VectorQ::zeros(n),
        }
    }

    pub fn from_first(alg: &LieAlgebra, x: VectorQ) -> Result<Self, AlgebraError> {
        let second_kind = alg.second_from_first(&x)?;
        Ok(GroupElement {
            first_kind: x,
            second_kind,
        })
    }

    pub fn from_second(alg: &LieAlgebra, t: VectorQ) -> Result<Self, AlgebraError> {
        let first_kind = alg.first_from_second(&t)?;
        Ok(GroupElement {
            first_kind,
            second_kind: t,
        })
    }

    pub fn mul(&self, alg: &LieAlgebra, other: &GroupElement) -> Result<Self, AlgebraError> {
        Self::from_first(alg, alg.bch_product(&self.first_kind, &other.first_kind)?)
    }

    pub fn inverse(&self, alg: &LieAlgebra) -> Result<Self, AlgebraError> {
        Self::from_first(alg, self.first_kind.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn heisenberg(c: Q) -> LieAlgebra {
        let mut sc = StructureConstants::new(3);
        sc.add(2, 1, 0, c).unwrap();
        LieAlgebra::new(sc).unwrap()
    }

    #[test]
    fn heisenberg_validates_with_class_two() {
        let mut sc = StructureConstants::new(3);
        sc.add(2, 1, 0, qi(1)).unwrap();
        let r = validate_algebra(&sc);
        assert!(r.is_valid());
        assert_eq!(r.nilpotency_class, Some(2));
        assert_eq!(r.derived_basis, vec![VectorQ::basis(3, 0)]);
        assert!(r.derived_is_initial_segment);
        // stored as c_{23}^1 = -1
        assert_eq!(sc.get(1, 2, 0), qi(-1));
        assert_eq!(sc.get(2, 1, 0), qi(1));
    }

    #[test]
    fn abelian_is_class_one() {
        let r = validate_algebra(&StructureConstants::new(4));
        assert!(r.is_valid());
        assert_eq!(r.nilpotency_class, Some(1));
        assert!(r.derived_basis.is_empty());
    }

    #[test]
    fn triangularity_violation_is_reported() {
        let mut sc = StructureConstants::new(3);
        sc.add(1, 2, 2, qi(1)).unwrap();
        let r = validate_algebra(&sc);
        assert_eq!(r.triangularity_violations, vec![(1, 2, 2)]);
        assert!(!r.is_valid());
        assert!(LieAlgebra::new(sc).is_err());
    }

    #[test]
    fn jacobi_violation_is_reported() {
        // [X3,X2]=X1, [X5,X4]=X2 breaks Jacobi on (3,4,5)
        let mut sc = StructureConstants::new(5);
        sc.add(2, 1, 0, qi(1)).unwrap();
        sc.add(4, 3, 1, qi(1)).unwrap();
        let r = validate_algebra(&sc);
        assert!(r.triangularity_violations.is_empty());
        assert_eq!(r.jacobi_violations, vec![(2, 3, 4)]);
    }

    #[test]
    fn self_bracket_rejected() {
        let mut sc = StructureConstants::new(2);
        assert_eq!(sc.add(1, 1, 0, qi(1)), Err(AlgebraError::SelfBracket(1)));
    }

    #[test]
    fn heisenberg_bch_matches_hand_truncation() {
        let h = heisenberg(qi(1));
        let (s, t) = (q(3, 2), q(-5, 7));
        let x = VectorQ::basis(3, 2).scale(&s);
        let y = VectorQ::basis(3, 1).scale(&t);
        let expected = VectorQ(vec![&s * &t / qi(2), t.clone(), s.clone()]);
        assert_eq!(h.bch(&x, &y), expected);
        assert!(h.bch(&x, &x.neg()).is_zero());
    }

    #[test]
    fn dynkin_class_three_matches_closed_form() {
        // x + y + [x,y]/2 + ([x,[x,y]] + [y,[y,x]])/12
        let terms: BTreeMap<Vec<bool>, Q> = dynkin_terms(3).into_iter().collect();
        assert_eq!(terms[&vec![false]], qi(1));
        assert_eq!(terms[&vec![true]], qi(1));
        let xy = &terms[&vec![false, true]] - &terms[&vec![true, false]];
        assert_eq!(xy, q(1, 2));
        let xxy = &terms[&vec![false, false, true]] - &terms[&vec![false, true, false]];
        let yyx = &terms[&vec![true, true, false]] - &terms[&vec![true, false, true]];
        assert_eq!(xxy, q(1, 12));
        assert_eq!(yyx, q(1, 12));
    }

    #[test]
    fn abelian_coordinates_are_identity() {
        let a = LieAlgebra::new(StructureConstants::new(3)).unwrap();
        let x = VectorQ(vec![q(1, 2), q(-3, 1), q(7, 5)]);
        assert_eq!(a.second_from_first(&x).unwrap(), x);
        assert_eq!(a.second_from_first(&VectorQ::zeros(3)).unwrap(), VectorQ::zeros(3));
    }

    #[test]
    fn heisenberg_second_kind_closed_form() {
        // exp(t1X1)exp(t2X2)exp(t3X3) = exp(x) with x1 = t1 - t2 t3 / 2
        let h = heisenberg(qi(1));
        let t = VectorQ(vec![q(1, 3), qi(2), q(-1, 2)]);
        let x = h.first_from_second(&t).unwrap();
        assert_eq!(x, VectorQ(vec![q(1, 3) - qi(2) * q(-1, 2) / qi(2), qi(2), q(-1, 2)]));
        assert_eq!(h.second_from_first(&x).unwrap(), t);
    }

    #[test]
    fn lattice_check_detects_fractional_bracket() {
        assert!(heisenberg(qi(1)).lattice_closure_check());
        assert!(!heisenberg(q(1, 3)).lattice_closure_check());
        assert!(LieAlgebra::new(StructureConstants::new(3))
            .unwrap()
            .lattice_closure_check());
    }

    #[test]
    fn chart_rejects_unnormalized_direction() {
        let bad = vec![vec![(0, VectorQ::basis(2, 1))], vec![(1, VectorQ::basis(2, 1))]];
        assert!(ProductChart::new(2, bad).is_err());
    }

    #[test]
    fn bracket_rejects_dimension_mismatch() {
        let h = heisenberg(qi(1));
        assert!(h.bracket(&VectorQ::zeros(2), &VectorQ::zeros(3)).is_err());
    }
}
