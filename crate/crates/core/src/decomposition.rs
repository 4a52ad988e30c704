//! Direct-integral decomposition of the wavelet representation and the
//! irreducibility evidence for its fibers.

use std::fmt;

use crate::algebra::LieAlgebra;
use crate::coadjoint::{Functional, FunctionalMode, OrbitData, Subspace};
use crate::dilation::{CoordStatus, Density, DensityProfile, DilationError, DilationSpec};
use crate::linalg;
use crate::poly::{Monomial, Poly};
use crate::tiling::{make_shannon_tiling, TilingError, TilingSpec};
use crate::{format_index_set, Q};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Dilation(#[from] DilationError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error("basis does not pass through the derived algebra")]
    BasisNotThroughDerivedAlgebra,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionCase {
    NontrivialAction,
    TrivialActionNoncommutative,
    TrivialActionCommutative,
}

impl DecompositionCase {
    pub fn number(self) -> u8 {
        match self {
            DecompositionCase::NontrivialAction => 1,
            DecompositionCase::TrivialActionNoncommutative => 2,
            DecompositionCase::TrivialActionCommutative => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DecompositionCase::NontrivialAction => "NontrivialAction",
            DecompositionCase::TrivialActionNoncommutative => "TrivialActionNoncommutative",
            DecompositionCase::TrivialActionCommutative => "TrivialActionCommutative",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Singleton,
    CountablyInfinite,
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Multiplicity::Singleton => "Singleton",
            Multiplicity::CountablyInfinite => "CountablyInfinite",
        })
    }
}

pub const FIBER_CASE_1: &str = "∫_E ⊕_{κ∈I} Ind_{Γ_α}^{Γ_α⋊H}(π_λ|_{Γ_α}) dλ";
pub const FIBER_CASE_2: &str = "∫_Λ∫_𝕋 ⊕_{κ∈J} π̃_{λ,σ}|_G dσ dλ";
pub const FIBER_CASE_3: &str = "∫_Λ π̃_λ|_{Γ⋊H} dλ";

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport {
    pub case: DecompositionCase,
    pub tiling: Option<TilingSpec>,
    pub fiber: &'static str,
    pub multiplicity: Multiplicity,
    pub det_modulus: Q,
    pub remarks: Vec<String>,
}

pub fn classify(
    alg: &LieAlgebra,
    spec: &DilationSpec,
    orbit: &OrbitData,
) -> Result<DecompositionReport, DecompositionError> {
    spec.require_automorphism()?;
    let multiplicity = if orbit.d == 0 {
        Multiplicity::Singleton
    } else {
        Multiplicity::CountablyInfinite
    };
    let mut remarks = Vec::new();
    let (case, tiling, fiber) = if !spec.acts_trivially_on_lambda {
        let t = make_shannon_tiling(spec, orbit)?;
        (DecompositionCase::NontrivialAction, Some(t), FIBER_CASE_1)
    } else {
        if !spec.lemma_detone_check()? {
            return Err(DecompositionError::Inconsistent(format!(
                "trivial action on Λ but |det A| = {}",
                spec.det_modulus
            )));
        }
        if alg.is_abelian() {
            remarks.push("fibers are the characters e^{2πi⟨x,λ⟩} extended to Γ⋊H".into());
            (DecompositionCase::TrivialActionCommutative, None, FIBER_CASE_3)
        } else {
            remarks.push("π̃_{λ,σ}(α) = C(α)χ_σ(α)".into());
            remarks.push("each fiber admits a finer decomposition ∫σ_λ^t dt (not constructed)".into());
            (DecompositionCase::TrivialActionNoncommutative, None, FIBER_CASE_2)
        }
    };
    Ok(DecompositionReport {
        case,
        tiling,
        fiber,
        multiplicity,
        det_modulus: spec.det_modulus.clone(),
        remarks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BdVerdict {
    Irreducible,
    NotImpliedIrreducible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BdResult {
    pub verdict: BdVerdict,
    /// ℚ-dimension reached by the tail coordinates.
    pub tail_rank: usize,
    /// `n - m`.
    pub required: usize,
    pub evidence: String,
}

/// Whether the radical contains an element whose coordinates beyond the
/// derived algebra are ℚ-linearly independent.
///
/// A general element is `Σ c_s r_s` with real `c_s`. Treating the `c_s` and
/// the variables of `λ` as independent, a rational relation `Σ q_j x_j = 0`
/// among the tail coordinates holds for every such element exactly when it
/// annihilates each coefficient of each tail polynomial. The check is
/// therefore the ℚ-rank of the matrix whose rows are indexed by
/// (radical vector, monomial) and whose columns are the tail coordinates.
pub fn bekka_driutti_check(
    alg: &LieAlgebra,
    lambda: &Functional,
    radical: &Subspace,
) -> Result<BdResult, DecompositionError> {
    if !alg.derived_is_initial_segment() {
        return Err(DecompositionError::BasisNotThroughDerivedAlgebra);
    }
    let n = alg.dim();
    let m = alg.derived_dim();
    let required = n - m;
    let tails: Vec<Vec<Poly>> = radical
        .basis()
        .iter()
        .map(|v| primitive_part(v)[m..].to_vec())
        .collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut max_degree = 0;
    for tail in &tails {
        let mut monomials: Vec<Monomial> = tail
            .iter()
            .flat_map(|p| p.terms().map(|(mono, _)| mono.clone()))
            .collect();
        monomials.sort();
        monomials.dedup();
        for mono in monomials {
            max_degree = max_degree.max(mono.degree());
            rows.push(tail.iter().map(|p| p.coefficient(&mono)).collect());
        }
    }
    let tail_rank = linalg::rank(&rows, required);
    let verdict = if tail_rank == required {
        BdVerdict::Irreducible
    } else {
        BdVerdict::NotImpliedIrreducible
    };
    let basis_note = match lambda.mode() {
        FunctionalMode::Rational => "rational λ: exact".to_string(),
        FunctionalMode::QStructured { symbols } if max_degree <= 1 => format!(
            "ℚ-structured λ: exact given ℚ-linear independence of 1, {}",
            symbols.join(", ")
        ),
        FunctionalMode::QStructured { symbols } => format!(
            "ℚ-structured λ: tails of degree {max_degree}, assumes 1, {} algebraically independent",
            symbols.join(", ")
        ),
        _ => "generic λ: entries treated as independent transcendentals".to_string(),
    };
    Ok(BdResult {
        verdict,
        tail_rank,
        required,
        evidence: format!(
            "dim_ℚ of radical tail coordinates {m_plus}..{n} = {tail_rank}, need {required} ({basis_note})",
            m_plus = m + 1
        ),
    })
}

/// Divide out common factors found among the entries (the monomial gcd,
/// then any entry dividing all others) and make the leading entry's
/// leading coefficient one.
fn primitive_part(v: &[Poly]) -> Vec<Poly> {
    let mut cur: Vec<Poly> = v.to_vec();
    let mut common: Option<Vec<u32>> = None;
    for p in &cur {
        for (mono, _) in p.terms() {
            let e = mono.exponents().to_vec();
            common = Some(match common {
                None => e,
                Some(c) => c
                    .iter()
                    .zip(e.iter().chain(std::iter::repeat(&0)))
                    .map(|(a, b)| *a.min(b))
                    .collect(),
            });
        }
    }
    if let Some(c) = common {
        let g = Poly::from_terms([(Monomial::new(c), Q::from_integer(1.into()))]);
        cur = cur
            .iter()
            .map(|p| p.div_exact(&g).expect("monomial gcd divides"))
            .collect();
    }
    'outer: loop {
        let mut candidates: Vec<Poly> = cur.iter().filter(|p| !p.is_constant()).cloned().collect();
        candidates.sort_by_key(|p| (p.total_degree(), p.num_terms()));
        for g in candidates {
            if let Some(d) = cur.iter().map(|p| p.div_exact(&g)).collect::<Option<Vec<Poly>>>() {
                cur = d;
                continue 'outer;
            }
        }
        break;
    }
    if let Some(p) = cur.iter().find(|p| !p.is_zero()) {
        let lc = p.leading_term().map(|(_, c)| c.clone()).expect("nonzero");
        cur = cur.iter().map(|x| x.scale(&lc.recip())).collect();
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    ReducibleLikely,
    Unknown,
}

impl fmt::Display for Irreducibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Irreducibility::Irreducible => "Irreducible",
            Irreducibility::ReducibleLikely => "ReducibleLikely",
            Irreducibility::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibilityVerdict {
    pub verdict: Irreducibility,
    /// Rule that decided the verdict.
    pub rule: &'static str,
    pub evidence: Vec<String>,
}

/// Irreducibility of `π_λ|_{Γ_α}` from the consulted rules, in order:
/// expansive dilation, dense `Γ_α`, the radical criterion, and finally a
/// discrete cross-section coordinate as a reducibility pattern.
pub fn fiber_irreducibility(
    report: &DecompositionReport,
    spec: &DilationSpec,
    orbit: &OrbitData,
    profile: &DensityProfile,
    bd: Option<&BdResult>,
) -> IrreducibilityVerdict {
    let mut evidence = vec![format!("decomposition case {}", report.case.number())];
    let mut decided: Option<(Irreducibility, &'static str)> = None;

    evidence.push(format!("expansive: {}", spec.is_expansive));
    if spec.is_expansive {
        decided = Some((Irreducibility::Irreducible, "expansive"));
    }
    let dense = profile.overall == Density::Dense;
    evidence.push(format!("density: {}", profile.summary()));
    if decided.is_none() && dense {
        decided = Some((Irreducibility::Irreducible, "density"));
    }
    match bd {
        Some(b) => {
            evidence.push(format!("radical criterion: {:?}; {}", b.verdict, b.evidence));
            if decided.is_none() && b.verdict == BdVerdict::Irreducible {
                decided = Some((Irreducibility::Irreducible, "radical criterion"));
            }
        }
        None => evidence.push("radical criterion: not evaluated".into()),
    }
    let discrete_j: Vec<usize> = orbit
        .j
        .iter()
        .copied()
        .filter(|&k| profile.coords[k] == CoordStatus::Discrete)
        .collect();
    if !discrete_j.is_empty() {
        evidence.push(format!(
            "cross-section coordinates {} are discrete in the closure of Γ_α (heuristic)",
            format_index_set(&discrete_j)
        ));
        if decided.is_none() {
            decided = Some((Irreducibility::ReducibleLikely, "discrete cross-section coordinate"));
        }
    }
    let (verdict, rule) = decided.unwrap_or((Irreducibility::Unknown, "none"));
    IrreducibilityVerdict {
        verdict,
        rule,
        evidence,
    }
}
