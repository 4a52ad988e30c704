//! Coadjoint orbit data: skew forms, jump indices, radicals, Vergne
//! polarizations, cross-sections and the Pfaffian.
//!
//! A functional is a vector of polynomials. Rational functionals have
//! constant entries, generic ones have entry `k` equal to the indeterminate
//! `λ_k`, and ℚ-structured ones are linear in declared symbols. Every rank
//! is taken over the fraction field of the functional's variables.

use std::fmt;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{LieAlgebra, VectorQ};
use crate::linalg::{self, Matrix};
use crate::poly::Poly;
use crate::spec_format::LambdaDecl;
use crate::{format_index_set, qi, Q};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OrbitError {
    #[error("functional has {got} entries, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("functional is not in the generic layer: jump set {found} instead of {expected}")]
    NotInGenericLayer { expected: String, found: String },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionalMode {
    Rational,
    Generic,
    /// Constant entries mixed with independent generic entries.
    Mixed,
    QStructured {
        symbols: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    entries: Vec<Poly>,
    mode: FunctionalMode,
    nvars: usize,
}

impl Functional {
    pub fn generic(n: usize) -> Self {
        Functional {
            entries: (0..n).map(Poly::var).collect(),
            mode: FunctionalMode::Generic,
            nvars: n,
        }
    }

    pub fn rational(values: Vec<Q>) -> Self {
        Functional {
            entries: values.into_iter().map(Poly::constant).collect(),
            mode: FunctionalMode::Rational,
            nvars: 0,
        }
    }

    pub fn mixed(values: Vec<Option<Q>>) -> Self {
        let n = values.len();
        Functional {
            entries: values
                .into_iter()
                .enumerate()
                .map(|(k, v)| v.map_or_else(|| Poly::var(k), Poly::constant))
                .collect(),
            mode: FunctionalMode::Mixed,
            nvars: n,
        }
    }

    /// Row `k` is `(c_0, c_1, .., c_r)` meaning `c_0 + Σ c_i θ_i`.
    pub fn qstructured(symbols: Vec<String>, rows: &[Vec<Q>]) -> Self {
        let r = symbols.len();
        let entries = rows
            .iter()
            .map(|row| {
                let mut p = Poly::constant(row[0].clone());
                for i in 0..r {
                    p = p.add(&Poly::var(i).scale(&row[i + 1]));
                }
                p
            })
            .collect();
        Functional {
            entries,
            mode: FunctionalMode::QStructured { symbols },
            nvars: r,
        }
    }

    pub fn from_decl(decl: &LambdaDecl, n: usize) -> Self {
        match decl {
            LambdaDecl::Generic => Self::generic(n),
            LambdaDecl::Rational(v) => Self::rational(v.clone()),
            LambdaDecl::Mixed(v) => Self::mixed(v.clone()),
            LambdaDecl::QStructured { symbols, rows } => Self::qstructured(symbols.clone(), rows),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn mode(&self) -> &FunctionalMode {
        &self.mode
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            FunctionalMode::Rational => "rational",
            FunctionalMode::Generic => "generic",
            FunctionalMode::Mixed => "mixed",
            FunctionalMode::QStructured { .. } => "qstruct",
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn var_names(&self) -> Vec<String> {
        match &self.mode {
            FunctionalMode::QStructured { symbols } => symbols.clone(),
            _ => (1..=self.nvars).map(|k| format!("λ{k}")).collect(),
        }
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(Poly::is_constant)
    }

    pub fn rational_values(&self) -> Option<Vec<Q>> {
        self.is_rational()
            .then(|| self.entries.iter().map(Poly::constant_term).collect())
    }

    /// `λ(X)` for rational `X`.
    pub fn apply(&self, x: &VectorQ) -> Poly {
        self.entries
            .iter()
            .zip(&x.0)
            .filter(|(_, c)| !c.is_zero())
            .fold(Poly::zero(), |acc, (p, c)| acc.add(&p.scale(c)))
    }

    /// `λ(X)` for `X` with polynomial coordinates.
    pub fn apply_poly(&self, x: &[Poly]) -> Poly {
        self.entries
            .iter()
            .zip(x)
            .fold(Poly::zero(), |acc, (p, c)| acc.add(&p.mul(c)))
    }

    /// Entrywise rescaling `λ_k ↦ s_k λ_k`.
    pub fn scaled(&self, s: &[Q]) -> Functional {
        Functional {
            entries: self.entries.iter().zip(s).map(|(p, c)| p.scale(c)).collect(),
            mode: self.mode.clone(),
            nvars: self.nvars,
        }
    }

    /// Rational functional obtained by substituting values for the variables.
    pub fn at(&self, point: &[Q]) -> Functional {
        Functional::rational(self.entries.iter().map(|p| p.eval(point)).collect())
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        let items: Vec<String> = self
            .entries
            .iter()
            .map(|p| p.display_with(&names).to_string())
            .collect();
        write!(f, "({})", items.join(", "))
    }
}

/// `B(λ)_{ij} = λ([X_i, X_j])`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewForm {
    pub matrix: Matrix<Poly>,
}

impl SkewForm {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Poly::is_zero)
    }

    pub fn at(&self, point: &[Q]) -> Matrix<Q> {
        self.matrix
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect())
            .collect()
    }

    pub fn submatrix(&self, idx: &[usize]) -> Matrix<Poly> {
        linalg::submatrix(&self.matrix, idx)
    }
}

pub fn skew_form(alg: &LieAlgebra, lambda: &Functional) -> Result<SkewForm, OrbitError> {
    let n = alg.dim();
    check_dim(n, lambda)?;
    let mut m = vec![vec![Poly::zero(); n]; n];
    for (i, j, k, c) in alg.structure().entries() {
        let v = lambda.entries[k].scale(c);
        m[i][j] = m[i][j].add(&v);
        m[j][i] = m[j][i].sub(&v);
    }
    Ok(SkewForm { matrix: m })
}

fn check_dim(n: usize, lambda: &Functional) -> Result<(), OrbitError> {
    if lambda.dim() != n {
        return Err(OrbitError::DimensionMismatch {
            expected: n,
            got: lambda.dim(),
        });
    }
    Ok(())
}

/// Indices where the rank of the first `k` rows increases.
pub fn jump_indices<S: linalg::Scalar>(b: &[Vec<S>]) -> Vec<usize> {
    let n = b.len();
    let mut out = Vec::new();
    let mut prev = 0;
    for k in 1..=n {
        let r = linalg::rank(&b[..k], n);
        if r > prev {
            out.push(k - 1);
        }
        prev = r;
    }
    out
}

/// Jump set of a particular functional (over its own fraction field).
pub fn jump_set_of(alg: &LieAlgebra, lambda: &Functional) -> Result<Vec<usize>, OrbitError> {
    let b = skew_form(alg, lambda)?;
    Ok(jump_indices(&b.matrix))
}

/// Subspace of `𝔫` over the fraction field of the functional's variables,
/// stored as a fraction-free reduced echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    basis: Matrix<Poly>,
    n: usize,
}

impl Subspace {
    pub fn span(vectors: &[Vec<Poly>], n: usize) -> Self {
        let e = linalg::ff_rref(vectors, n);
        Subspace { basis: e.rows, n }
    }

    pub fn span_rational(vectors: &[VectorQ], n: usize) -> Self {
        let vs: Vec<Vec<Poly>> = vectors
            .iter()
            .map(|v| v.0.iter().cloned().map(Poly::constant).collect())
            .collect();
        Self::span(&vs, n)
    }

    pub fn whole(n: usize) -> Self {
        Self::span_rational(&(0..n).map(|i| VectorQ::basis(n, i)).collect::<Vec<_>>(), n)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Poly>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        linalg::in_span(&self.basis, v, self.n)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains_subspace(other)
    }

    /// Image under the diagonal map `X_k ↦ s_k X_k`.
    pub fn map_diag(&self, s: &[Q]) -> Subspace {
        let vs: Vec<Vec<Poly>> = self
            .basis
            .iter()
            .map(|v| v.iter().zip(s).map(|(p, c)| p.scale(c)).collect())
            .collect();
        Subspace::span(&vs, self.n)
    }

    /// Rational basis, when every entry is constant.
    pub fn rational_basis(&self) -> Option<Vec<VectorQ>> {
        self.basis
            .iter()
            .map(|v| {
                v.iter()
                    .all(Poly::is_constant)
                    .then(|| VectorQ(v.iter().map(Poly::constant_term).collect()))
            })
            .collect()
    }

    pub fn display_with(&self, basis_names: &[String], var_names: &[String]) -> String {
        let vecs: Vec<String> = self
            .basis
            .iter()
            .map(|v| format_poly_vector(v, basis_names, var_names))
            .collect();
        format!("span{{{}}}", vecs.join(", "))
    }
}

pub fn format_poly_vector(v: &[Poly], basis_names: &[String], var_names: &[String]) -> String {
    let mut out = String::new();
    for (p, name) in v.iter().zip(basis_names) {
        if p.is_zero() {
            continue;
        }
        let coeff = p.display_with(var_names).to_string();
        let term = if coeff == "1" {
            name.clone()
        } else if coeff == "-1" {
            format!("-{name}")
        } else if p.num_terms() > 1 {
            format!("({coeff})*{name}")
        } else {
            format!("{coeff}*{name}")
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(&format!(" - {rest}"));
        } else {
            out.push_str(&format!(" + {term}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Bracket of vectors with polynomial coordinates.
pub fn bracket_poly(alg: &LieAlgebra, u: &[Poly], v: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); alg.dim()];
    for (i, j, k, c) in alg.structure().entries() {
        let t = u[i].mul(&v[j]).sub(&u[j].mul(&v[i]));
        if !t.is_zero() {
            out[k] = out[k].add(&t.scale(c));
        }
    }
    out
}

/// `𝔫_i(λ)` for `i = 1..n`: the kernel of the upper-left `i×i` block.
pub fn chain(alg: &LieAlgebra, lambda: &Functional) -> Result<Vec<Subspace>, OrbitError> {
    let n = alg.dim();
    let b = skew_form(alg, lambda)?;
    Ok((1..=n)
        .map(|i| {
            let idx: Vec<usize> = (0..i).collect();
            let ker = linalg::kernel(&b.submatrix(&idx), i);
            let padded: Vec<Vec<Poly>> = ker
                .into_iter()
                .map(|mut v| {
                    v.resize(n, Poly::zero());
                    v
                })
                .collect();
            Subspace::span(&padded, n)
        })
        .collect())
}

pub fn radical(alg: &LieAlgebra, lambda: &Functional) -> Result<Subspace, OrbitError> {
    let n = alg.dim();
    let b = skew_form(alg, lambda)?;
    Ok(Subspace::span(&linalg::kernel(&b.matrix, n), n))
}

/// `Σ_i 𝔫_i(λ)`, with its defining properties re-verified.
pub fn vergne_polarization(alg: &LieAlgebra, orbit: &OrbitData, lambda: &Functional) -> Result<Subspace, OrbitError> {
    let n = alg.dim();
    let found = jump_set_of(alg, lambda)?;
    if found != orbit.e {
        return Err(OrbitError::NotInGenericLayer {
            expected: format_index_set(&orbit.e),
            found: format_index_set(&found),
        });
    }
    let p = polarization_unchecked(alg, lambda)?;
    if p.dim() != n - orbit.d {
        return Err(OrbitError::Inconsistent(format!(
            "polarization has dimension {} instead of {}",
            p.dim(),
            n - orbit.d
        )));
    }
    if !is_isotropic(alg, lambda, &p) {
        return Err(OrbitError::Inconsistent("polarization is not isotropic".into()));
    }
    if !is_subalgebra(alg, &p) {
        return Err(OrbitError::Inconsistent("polarization is not a subalgebra".into()));
    }
    Ok(p)
}

fn polarization_unchecked(alg: &LieAlgebra, lambda: &Functional) -> Result<Subspace, OrbitError> {
    let all: Vec<Vec<Poly>> = chain(alg, lambda)?.into_iter().flat_map(|s| s.basis).collect();
    Ok(Subspace::span(&all, alg.dim()))
}

pub fn is_isotropic(alg: &LieAlgebra, lambda: &Functional, s: &Subspace) -> bool {
    let b = s.basis();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| lambda.apply_poly(&bracket_poly(alg, &b[i], &b[j])).is_zero()))
}

pub fn is_subalgebra(alg: &LieAlgebra, s: &Subspace) -> bool {
    let b = s.basis();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| s.contains(&bracket_poly(alg, &b[i], &b[j]))))
}

/// Generic orbit data of an algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitData {
    pub n: usize,
    pub e: Vec<usize>,
    pub j: Vec<usize>,
    pub d: usize,
    /// Pfaffian of `B_e(λ)` in the generic variables `λ_1..λ_n`, signed so
    /// that its leading coefficient is positive.
    pub pfaffian: Poly,
    /// Free coordinates of the cross-section, `{1..n} ∖ e`.
    pub lambda_coords: Vec<usize>,
    /// Polarization at the generic functional.
    pub polarization: Subspace,
}

const CONFIRMATION_POINTS: usize = 3;
const CONFIRMATION_SEED: u64 = 0x5eed_0f0b17;

impl OrbitData {
    pub fn compute(alg: &LieAlgebra) -> Result<OrbitData, OrbitError> {
        let n = alg.dim();
        let generic = Functional::generic(n);
        let b = skew_form(alg, &generic)?;
        let e = jump_indices(&b.matrix);

        let mut rng = ChaCha8Rng::seed_from_u64(CONFIRMATION_SEED);
        for _ in 0..CONFIRMATION_POINTS {
            let point: Vec<Q> = (0..n)
                .map(|_| qi(rng.gen_range(1..=1_000_000) * if rng.gen() { 1 } else { -1 }))
                .collect();
            let sampled = jump_indices(&b.at(&point));
            if sampled != e {
                return Err(OrbitError::Inconsistent(format!(
                    "symbolic jump set {} but {} at a sample point",
                    format_index_set(&e),
                    format_index_set(&sampled)
                )));
            }
        }
        if e.len() % 2 != 0 {
            return Err(OrbitError::Inconsistent("odd jump set".into()));
        }
        let d = e.len() / 2;

        let be = b.submatrix(&e);
        let mut pfaffian = linalg::pfaffian(&be);
        if pfaffian.leading_term().is_some_and(|(_, c)| c.is_negative()) {
            pfaffian = pfaffian.neg();
        }
        if pfaffian.is_zero() {
            return Err(OrbitError::Inconsistent("Pfaffian vanishes identically".into()));
        }
        if pfaffian.mul(&pfaffian) != linalg::det(&be) {
            return Err(OrbitError::Inconsistent(
                "Pfaffian squared differs from the determinant".into(),
            ));
        }

        let polarization = polarization_unchecked(alg, &generic)?;
        if polarization.dim() != n - d {
            return Err(OrbitError::Inconsistent(format!(
                "generic polarization has dimension {}",
                polarization.dim()
            )));
        }

        let mut j = Vec::new();
        let mut rows: Vec<Vec<Poly>> = polarization.basis().to_vec();
        let unit = |k: usize| -> Vec<Poly> {
            (0..n)
                .map(|i| if i == k { Poly::one() } else { Poly::zero() })
                .collect()
        };
        let mut next = 0;
        for &k in &e {
            while next < k {
                rows.push(unit(next));
                next += 1;
            }
            if !linalg::in_span(&rows, &unit(k), n) {
                j.push(k);
            }
        }
        if j.len() != d {
            return Err(OrbitError::Inconsistent(format!(
                "cross-section index set {} has {} elements, expected {d}",
                format_index_set(&j),
                j.len()
            )));
        }

        let lambda_coords = (0..n).filter(|k| !e.contains(k)).collect();
        Ok(OrbitData {
            n,
            e,
            j,
            d,
            pfaffian,
            lambda_coords,
            polarization,
        })
    }

    /// `P` restricted to the cross-section (`λ_k = 0` for `k ∈ e`).
    pub fn pfaffian_on_cross_section(&self) -> Poly {
        self.pfaffian.restrict_zero(&self.e)
    }

    pub fn var_names(&self) -> Vec<String> {
        (1..=self.n).map(|k| format!("λ{k}")).collect()
    }

    pub fn pfaffian_text(&self) -> String {
        self.pfaffian.display_with(&self.var_names()).to_string()
    }

    pub fn omega_descriptor(&self) -> String {
        format!("jump set = {} and P(λ) ≠ 0", format_index_set(&self.e))
    }

    pub fn lambda_descriptor(&self) -> String {
        let zeros: Vec<String> = self.e.iter().map(|k| format!("λ{} = 0", k + 1)).collect();
        let mut parts = zeros;
        parts.push(format!(
            "{} ≠ 0",
            self.pfaffian_on_cross_section().display_with(&self.var_names())
        ));
        format!(
            "{{λ : {}}}, free coordinates {}",
            parts.join(", "),
            format_index_set(&self.lambda_coords)
        )
    }

    /// Rational λ lies in the generic layer.
    pub fn in_generic_layer(&self, alg: &LieAlgebra, values: &[Q]) -> bool {
        if self.pfaffian.eval(values).is_zero() {
            return false;
        }
        let b = skew_form(alg, &Functional::rational(values.to_vec())).expect("dimension checked by caller");
        jump_indices(&b.matrix) == self.e
    }

    /// Rational λ lies in the cross-section Λ.
    pub fn in_cross_section(&self, alg: &LieAlgebra, values: &[Q]) -> bool {
        self.e.iter().all(|&k| values[k].is_zero()) && self.in_generic_layer(alg, values)
    }

    pub fn summary(&self) -> String {
        format!(
            "e = {}; j = {}; d = {}; P = {}",
            format_index_set(&self.e),
            format_index_set(&self.j),
            self.d,
            self.pfaffian_text()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn alg(name: &str) -> LieAlgebra {
        catalog::document(name).unwrap().algebra().unwrap()
    }

    fn rat(xs: &[i64]) -> Functional {
        Functional::rational(xs.iter().map(|&x| qi(x)).collect())
    }

    #[test]
    fn heisenberg_skew_form() {
        let h = alg("heisenberg");
        let b = skew_form(&h, &Functional::generic(3)).unwrap();
        assert_eq!(b.matrix[2][1], Poly::var(0));
        assert_eq!(b.matrix[1][2], Poly::var(0).neg());
        let nonzero = b.matrix.iter().flatten().filter(|p| !p.is_zero()).count();
        assert_eq!(nonzero, 2);
    }

    #[test]
    fn five_dim_skew_form_rows() {
        let g = alg("five_dim");
        let b = skew_form(&g, &Functional::generic(5)).unwrap();
        // [X_i, Y] = Z_i puts λ_1, λ_2 in rows 3, 4 at column 5
        assert_eq!(b.matrix[2][4], Poly::var(0));
        assert_eq!(b.matrix[3][4], Poly::var(1));
        assert_eq!(b.matrix[4][2], Poly::var(0).neg());
    }

    #[test]
    fn abelian_is_degenerate() {
        let a = alg("abelian3");
        assert!(skew_form(&a, &Functional::generic(3)).unwrap().is_zero());
        let o = OrbitData::compute(&a).unwrap();
        assert!(o.e.is_empty() && o.j.is_empty());
        assert_eq!(o.d, 0);
        assert_eq!(o.pfaffian, Poly::one());
        let p = vergne_polarization(&a, &o, &Functional::generic(3)).unwrap();
        assert!(p.same_as(&Subspace::whole(3)));
        assert!(radical(&a, &rat(&[1, 2, 3])).unwrap().same_as(&Subspace::whole(3)));
    }

    #[test]
    fn heisenberg_orbit_data() {
        let h = alg("heisenberg");
        let o = OrbitData::compute(&h).unwrap();
        assert_eq!(o.summary(), "e = {2,3}; j = {3}; d = 1; P = λ1");
        assert_eq!(o.lambda_coords, vec![0]);
    }

    #[test]
    fn heisenberg_radical_and_polarization() {
        let h = alg("heisenberg");
        let o = OrbitData::compute(&h).unwrap();
        let z = rat(&[1, 0, 0]);
        let r = radical(&h, &z).unwrap();
        assert!(r.same_as(&Subspace::span_rational(&[VectorQ::basis(3, 0)], 3)));
        let p = vergne_polarization(&h, &o, &z).unwrap();
        let expect = Subspace::span_rational(&[VectorQ::basis(3, 0), VectorQ::basis(3, 1)], 3);
        assert!(p.same_as(&expect));
        let err = vergne_polarization(&h, &o, &rat(&[0, 1, 1])).unwrap_err();
        assert!(matches!(err, OrbitError::NotInGenericLayer { .. }));
    }

    #[test]
    fn upper4_jump_set_and_cross_section() {
        let g = alg("upper4");
        let o = OrbitData::compute(&g).unwrap();
        assert_eq!(o.e, vec![1, 2, 3, 5]);
        assert_eq!(o.d, 2);
        assert_eq!(o.lambda_coords, vec![0, 4]);
    }

    #[test]
    fn five_dim_polarization() {
        let g = alg("five_dim");
        let o = OrbitData::compute(&g).unwrap();
        assert_eq!(o.e, vec![2, 4]);
        assert_eq!(o.j, vec![4]);
        let lam = rat(&[3, -2, 0, 5, 0]);
        let p = vergne_polarization(&g, &o, &lam).unwrap();
        let expect = Subspace::span_rational(&(0..4).map(|i| VectorQ::basis(5, i)).collect::<Vec<_>>(), 5);
        assert!(p.same_as(&expect));
    }

    #[test]
    fn free_two_step_cross_section() {
        let g = alg("free2step");
        let o = OrbitData::compute(&g).unwrap();
        assert_eq!(o.e, vec![3, 4]);
        assert_eq!(o.j, vec![4]);
        assert_eq!(o.lambda_coords, vec![0, 1, 2, 5]);
    }

    #[test]
    fn pfaffian_squares_to_determinant_on_examples() {
        for (name, _) in catalog::ALL {
            let g = alg(name);
            let o = OrbitData::compute(&g).unwrap();
            let b = skew_form(&g, &Functional::generic(g.dim())).unwrap();
            let be = b.submatrix(&o.e);
            assert_eq!(o.pfaffian.mul(&o.pfaffian), linalg::det(&be), "{name}");
        }
    }
}
