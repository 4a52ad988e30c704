//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so polynomials
//! in different numbers of variables mix freely (a missing exponent is zero).
//! Terms are kept in graded lexicographic order; the leading term is the
//! largest monomial under that order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::Q;

/// Exponent vector of a monomial, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize) -> Self {
        let mut exps = vec![0; i + 1];
        exps[i] = 1;
        Monomial(exps)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let exps = (0..len).map(|i| self.exponent(i) + other.exponent(i)).collect();
        Monomial::new(exps)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut exps = Vec::with_capacity(self.0.len());
        for i in 0..self.0.len() {
            let a = self.exponent(i);
            let b = other.exponent(i);
            if b > a {
                return None;
            }
            exps.push(a - b);
        }
        Some(Monomial::new(exps))
    }

    /// Exponent vector padded (or truncated) to `n` entries.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exponent(i)).collect()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let len = self.0.len().max(other.0.len());
            for i in 0..len {
                match self.exponent(i).cmp(&other.exponent(i)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(i), Q::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(terms: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant term (the whole value when `is_constant`).
    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Number of variables actually referenced.
    pub fn var_span(&self) -> usize {
        self.terms.keys().map(|m| m.0.len()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder (or the divisor is zero).
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            let term = Poly::from_terms([(qm.clone(), qc.clone())]);
            rem = rem.sub(&term.mul(divisor));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point.get(i).cloned().unwrap_or_else(Q::zero);
                t *= num_traits::pow(x, e as usize);
            }
            acc += t;
        }
        acc
    }

    /// Replace every variable `i` by `subs[i]` (variables past the end are kept).
    pub fn substitute(&self, subs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = subs.get(i).cloned().unwrap_or_else(|| Poly::var(i));
                t = t.mul(&base.pow(e));
            }
            out = out.add(&t);
        }
        out
    }

    /// Set the listed variables to zero.
    pub fn restrict_zero(&self, vars: &[usize]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| vars.iter().all(|&v| m.exponent(v) == 0))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `Some(c)` with `self == c * other` for a rational constant `c`.
    pub fn rational_multiple_of(&self, other: &Poly) -> Option<Q> {
        if other.is_zero() {
            return if self.is_zero() { Some(Q::zero()) } else { None };
        }
        let q = self.div_exact(other)?;
        if q.is_constant() {
            Some(q.constant_term())
        } else {
            None
        }
    }

    /// Sparse monomial list `(coefficient, exponent vector)` in graded
    /// lexicographic order, exponents padded to `nvars`.
    pub fn monomial_list(&self, nvars: usize) -> Vec<(Q, Vec<u32>)> {
        self.terms.iter().map(|(m, c)| (c.clone(), m.padded(nvars))).collect()
    }

    /// Render with the given variable names (falls back to `x{i+1}`).
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.poly.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = self.names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn grlex_orders_by_degree_then_lex() {
        let a = Monomial::new(vec![2]);
        let b = Monomial::new(vec![0, 1]);
        let c = Monomial::new(vec![1, 1]);
        assert!(b < a);
        assert!(c < a);
        assert!(Monomial::new(vec![0, 2]) < Monomial::new(vec![1, 1]));
        assert_eq!(Monomial::new(vec![1, 0, 0]), Monomial::var(0));
    }

    #[test]
    fn exact_division_recovers_factor() {
        let f = x(0).sub(&x(2));
        let g = x(1).sub(&x(2));
        let h = x(0).add(&x(1)).add(&x(2));
        let prod = f.mul(&g).mul(&h);
        assert_eq!(prod.div_exact(&f.mul(&h)), Some(g.clone()));
        assert_eq!(prod.div_exact(&x(0)), None);
        assert_eq!(prod.scale(&q(-3, 2)).rational_multiple_of(&prod), Some(q(-3, 2)));
        assert_eq!(prod.rational_multiple_of(&f), None);
    }

    #[test]
    fn eval_and_substitute_agree() {
        let p = x(0).mul(&x(1)).add(&x(2).pow(2)).scale(&q(1, 3));
        let pt = [q(2, 1), q(-1, 2), q(3, 1)];
        assert_eq!(p.eval(&pt), q(1, 3) * (q(-1, 1) + q(9, 1)));
        let consts: Vec<Poly> = pt.iter().cloned().map(Poly::constant).collect();
        assert_eq!(p.substitute(&consts), Poly::constant(p.eval(&pt)));
        assert_eq!(p.restrict_zero(&[2]), x(0).mul(&x(1)).scale(&q(1, 3)));
    }

    #[test]
    fn display_is_deterministic() {
        let p = x(0).mul(&x(0)).neg().add(&x(1).scale(&q(1, 2)));
        let names = vec!["l1".to_string(), "l2".to_string()];
        assert_eq!(p.display_with(&names).to_string(), "-l1^2 + 1/2*l2");
        assert_eq!(p.monomial_list(2), vec![(q(1, 2), vec![0, 1]), (q(-1, 1), vec![2, 0])]);
    }
}
