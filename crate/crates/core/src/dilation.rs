//! Diagonal dilations: automorphism check, dual action, density of `Γ_α`
//! and constructive approximation by elements of `Γ_α`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraError, GroupElement, LieAlgebra, VectorQ};
use crate::coadjoint::Functional;
use crate::{format_index_set, Q};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DilationError {
    #[error("eigenvalue a{0} is zero")]
    ZeroEigenvalue(usize),
    #[error("{got} eigenvalues for dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not an automorphism: a_i a_j != a_k at {0}")]
    NotAutomorphism(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("dilation is not expansive")]
    NotExpansive,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DilationSpec {
    pub a: Vec<Q>,
    pub is_automorphism: bool,
    /// `(i, j, k)` with `c_{ij}^k ≠ 0` but `a_i a_j ≠ a_k`.
    pub violations: Vec<(usize, usize, usize)>,
    pub is_expansive: bool,
    pub acts_trivially_on_lambda: bool,
    pub det_modulus: Q,
}

pub fn validate_dilation(alg: &LieAlgebra, a: &[Q], e: &[usize]) -> Result<DilationSpec, DilationError> {
    let n = alg.dim();
    if a.len() != n {
        return Err(DilationError::DimensionMismatch {
            expected: n,
            got: a.len(),
        });
    }
    if let Some(k) = a.iter().position(Zero::is_zero) {
        return Err(DilationError::ZeroEigenvalue(k + 1));
    }
    let violations: Vec<_> = alg
        .structure()
        .entries()
        .filter(|(i, j, k, _)| &a[*i] * &a[*j] != a[*k])
        .map(|(i, j, k, _)| (i, j, k))
        .collect();
    let det_modulus = a.iter().fold(Q::one(), |acc, x| acc * x).abs();
    Ok(DilationSpec {
        a: a.to_vec(),
        is_automorphism: violations.is_empty(),
        violations,
        is_expansive: a.iter().all(|x| x.abs() > Q::one()),
        acts_trivially_on_lambda: (0..n).filter(|k| !e.contains(k)).all(|k| a[k].is_one()),
        det_modulus,
    })
}

fn format_triples(v: &[(usize, usize, usize)]) -> String {
    let items: Vec<String> = v
        .iter()
        .map(|(i, j, k)| format!("({},{},{})", i + 1, j + 1, k + 1))
        .collect();
    items.join(" ")
}

/// `x^m` for integer `m`.
pub fn qpow(x: &Q, m: i64) -> Q {
    let p = num_traits::pow(x.clone(), m.unsigned_abs() as usize);
    if m < 0 {
        p.recip()
    } else {
        p
    }
}

impl DilationSpec {
    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn require_automorphism(&self) -> Result<(), DilationError> {
        if self.is_automorphism {
            Ok(())
        } else {
            Err(DilationError::NotAutomorphism(format_triples(&self.violations)))
        }
    }

    /// Eigenvalues of `A^m`.
    pub fn power(&self, m: i64) -> Vec<Q> {
        self.a.iter().map(|x| qpow(x, m)).collect()
    }

    /// `δ(m) = |det A|^{-m}`.
    pub fn modular_factor(&self, m: i64) -> Q {
        qpow(&self.det_modulus, -m)
    }

    /// `(A^m λ)_k = a_k^m λ_k`.
    pub fn dual_action(&self, lambda: &Functional, m: i64) -> Functional {
        lambda.scaled(&self.power(m))
    }

    /// `α^m` in first-kind coordinates.
    pub fn apply(&self, x: &VectorQ, m: i64) -> VectorQ {
        x.hadamard(&self.power(m))
    }

    /// A dilation acting trivially on the cross-section has `|det A| = 1`.
    pub fn lemma_detone_check(&self) -> Result<bool, DilationError> {
        self.require_automorphism()
            .map_err(|e| DilationError::PreconditionViolated(e.to_string()))?;
        if !self.acts_trivially_on_lambda {
            return Err(DilationError::PreconditionViolated(
                "dilation acts non-trivially on the cross-section".into(),
            ));
        }
        Ok(self.det_modulus.is_one())
    }

    pub fn density_profile(&self, alg: &LieAlgebra) -> Result<DensityProfile, DilationError> {
        self.require_automorphism()?;
        let n = self.dim();
        let mut evidence = Vec::new();
        if self.is_expansive {
            evidence.push("expansive: every |a_k| > 1, so Γ_α is dense".to_string());
            return Ok(DensityProfile {
                coords: vec![CoordStatus::Dense; n],
                overall: Density::Dense,
                evidence,
            });
        }
        let unit = |k: usize| self.a[k].abs().is_one();
        let mut coords: Vec<CoordStatus> = (0..n)
            .map(|k| {
                if unit(k) {
                    CoordStatus::Discrete
                } else {
                    CoordStatus::Dense
                }
            })
            .collect();
        for k in 0..n {
            if !unit(k) {
                evidence.push(format!("X{}: |a{}| = {} ≠ 1", k + 1, k + 1, self.a[k].abs()));
            }
        }
        let entries: Vec<(usize, usize, usize)> = alg.structure().entries().map(|(i, j, k, _)| (i, j, k)).collect();
        loop {
            let mut changed = false;
            for &(i, j, k) in &entries {
                if coords[k] == CoordStatus::Dense {
                    continue;
                }
                if !(unit(i) && unit(j)) {
                    coords[k] = CoordStatus::Dense;
                    evidence.push(format!(
                        "X{}: saturated through [X{}, X{}] with non-unit scale",
                        k + 1,
                        i + 1,
                        j + 1
                    ));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for (k, c) in coords.iter().enumerate() {
            if *c == CoordStatus::Discrete {
                evidence.push(format!(
                    "X{}: a{} = {} and no saturating bracket",
                    k + 1,
                    k + 1,
                    self.a[k]
                ));
            }
        }
        let overall = if coords.iter().all(|c| *c == CoordStatus::Dense) {
            Density::Dense
        } else {
            Density::NotDense
        };
        Ok(DensityProfile {
            coords,
            overall,
            evidence,
        })
    }

    /// Element `α^{-m}(exp j_1X_1 ··· exp j_nX_n)` of `Γ_α` within `eps` of
    /// `exp x` in first-kind max norm.
    pub fn approximate_in_gamma_alpha(
        &self,
        alg: &LieAlgebra,
        x: &VectorQ,
        eps: &Q,
    ) -> Result<Approximation, DilationError> {
        if !self.is_expansive {
            return Err(DilationError::NotExpansive);
        }
        self.require_automorphism()?;
        if !eps.is_positive() {
            return Err(DilationError::PreconditionViolated("ε must be positive".into()));
        }
        let t = alg.second_from_first(x)?;
        for m in 0..=MAX_REFINEMENT {
            let scale = self.power(m);
            let j: Vec<BigInt> = t.0.iter().zip(&scale).map(|(ti, s)| round_half_up(&(ti * s))).collect();
            let coords = VectorQ(
                j.iter()
                    .zip(&scale)
                    .map(|(ji, s)| Q::from_integer(ji.clone()) / s)
                    .collect(),
            );
            let element = GroupElement::from_second(alg, coords)?;
            let error = element.first_kind.max_abs_diff(x);
            if &error < eps {
                return Ok(Approximation {
                    j,
                    k: -m,
                    element,
                    error,
                });
            }
        }
        Err(DilationError::Inconsistent(format!(
            "no approximation within {eps} after {MAX_REFINEMENT} refinements"
        )))
    }
}

const MAX_REFINEMENT: i64 = 4096;

fn round_half_up(x: &Q) -> BigInt {
    let two = BigInt::from(2);
    let num = x.numer() * &two + x.denom();
    num.div_floor(&(x.denom() * two))
}

impl fmt::Display for DilationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(
            f,
            "a = ({}); automorphism: {}; expansive: {}; trivial on Λ: {}; |det A| = {}",
            a.join(", "),
            self.is_automorphism,
            self.is_expansive,
            self.acts_trivially_on_lambda,
            self.det_modulus
        )?;
        if !self.violations.is_empty() {
            write!(f, "; violations: {}", format_triples(&self.violations))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub j: Vec<BigInt>,
    pub k: i64,
    pub element: GroupElement,
    /// First-kind max-norm distance to the target.
    pub error: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordStatus {
    Dense,
    Discrete,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Density {
    Dense,
    NotDense,
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub coords: Vec<CoordStatus>,
    pub overall: Density,
    pub evidence: Vec<String>,
}

impl DensityProfile {
    pub fn discrete_coords(&self) -> Vec<usize> {
        (0..self.coords.len())
            .filter(|&k| self.coords[k] == CoordStatus::Discrete)
            .collect()
    }

    /// Second-kind description of the closure of `Γ_α`.
    pub fn closure_descriptor(&self, names: &[String]) -> String {
        self.coords
            .iter()
            .zip(names)
            .map(|(c, name)| match c {
                CoordStatus::Dense => format!("exp(ℝ{name})"),
                CoordStatus::Discrete => format!("exp(ℤ{name})"),
                CoordStatus::Unknown => format!("exp(?{name})"),
            })
            .collect()
    }

    pub fn summary(&self) -> String {
        let overall = match self.overall {
            Density::Dense => "Dense",
            Density::NotDense => "NotDense",
            Density::Unknown => "Unknown",
        };
        format!(
            "{overall}; discrete coordinates {}",
            format_index_set(&self.discrete_coords())
        )
    }
}
