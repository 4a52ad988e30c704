//! End-to-end analysis of a spec document and its deterministic text and
//! structured renderings.
//!
//! The structured format is a header line followed by `key: value` lines in
//! sorted key order. Multi-line values are written as `key: |` followed by
//! lines indented by two spaces. The `spec` entry holds the canonical spec
//! text, so a structured report can be fed back in as input.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{validate_algebra, LieAlgebra, ValidationReport};
use crate::coadjoint::{self, Functional, OrbitData};
use crate::decomposition::{
    bekka_driutti_check, classify, fiber_irreducibility, BdResult, DecompositionReport, IrreducibilityVerdict,
};
use crate::dilation::{validate_dilation, DensityProfile, DilationSpec};
use crate::induced_rep::{verify_homomorphism, verify_intertwining, RepModel, TestFunction, WaveletOps};
use crate::spec_format::{parse_spec, ParseError, SpecDocument};
use crate::tiling::VerificationReport;
use crate::{format_index_set, qi, Q};

pub const STRUCTURED_HEADER: &str = "# orbitkit structured report v1";

/// Threshold for the pointwise representation identities.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Threshold for the quadrature-based unitarity check.
pub const UNITARITY_TOL: f64 = 1e-3;
/// Largest dimension for which the tensor quadrature is attempted.
pub const UNITARITY_MAX_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Failure {
    #[error("parse error at {0}")]
    Parse(ParseError),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => 2,
            Failure::Validation(_) => 3,
            Failure::Precondition(_) => 4,
            Failure::Internal(_) => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub seed: u64,
    pub tiling_samples: usize,
    pub identity_samples: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 7,
            tiling_samples: 10_000,
            identity_samples: 100,
        }
    }
}

/// Parse either a spec file or a structured report carrying one.
pub fn ingest(text: &str) -> Result<SpecDocument, Failure> {
    if text.starts_with(STRUCTURED_HEADER) {
        let map = parse_structured(text).map_err(Failure::Parse)?;
        let spec = map.get("spec").ok_or_else(|| {
            Failure::Parse(ParseError {
                kind: crate::spec_format::ErrorKind::Syntax,
                line: 1,
                column: 1,
                message: "report has no spec entry".into(),
            })
        })?;
        parse_spec(spec).map_err(Failure::Parse)
    } else {
        parse_spec(text).map_err(Failure::Parse)
    }
}

/// Entries of a structured report.
pub fn parse_structured(text: &str) -> Result<BTreeMap<String, String>, ParseError> {
    let err = |line: usize, message: &str| ParseError {
        kind: crate::spec_format::ErrorKind::Syntax,
        line,
        column: 1,
        message: message.into(),
    };
    let mut map = BTreeMap::new();
    let mut lines = text.lines().enumerate().peekable();
    match lines.next() {
        Some((_, h)) if h == STRUCTURED_HEADER => {}
        _ => return Err(err(1, "missing report header")),
    }
    while let Some((i, line)) = lines.next() {
        let (key, value) = line
            .split_once(": ")
            .ok_or_else(|| err(i + 1, "expected `key: value`"))?;
        let value = if value == "|" {
            let mut block = String::new();
            while let Some((_, next)) = lines.peek() {
                match next.strip_prefix("  ") {
                    Some(rest) => {
                        block.push_str(rest);
                        block.push('\n');
                        lines.next();
                    }
                    None => break,
                }
            }
            block
        } else {
            value.to_string()
        };
        if map.insert(key.to_string(), value).is_some() {
            return Err(err(i + 1, "duplicate key"));
        }
    }
    Ok(map)
}

/// Result of one numerical identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub name: String,
    pub outcome: Result<f64, String>,
    pub threshold: f64,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        matches!(self.outcome, Ok(x) if x < self.threshold)
    }

    fn render(&self) -> String {
        match &self.outcome {
            Ok(x) => format!(
                "{:.3e} (threshold {:.0e}) {}",
                x,
                self.threshold,
                if self.passed() { "pass" } else { "FAIL" }
            ),
            Err(e) => format!("error: {e}"),
        }
    }
}

/// Algebra, orbit, dilation and decomposition data for a document.
pub struct Analysis {
    pub doc: SpecDocument,
    pub alg: LieAlgebra,
    pub validation: ValidationReport,
    pub orbit: OrbitData,
    pub lambda: Functional,
    pub dilation: Option<DilationSpec>,
    pub density: Option<DensityProfile>,
    pub decomposition: Option<Result<DecompositionReport, String>>,
    pub radical_criterion: Result<BdResult, String>,
    pub irreducibility: Option<IrreducibilityVerdict>,
    pub lattice_closes: Option<bool>,
}

impl Analysis {
    pub fn new(doc: SpecDocument) -> Result<Self, Failure> {
        let sc = doc
            .structure_constants()
            .map_err(|e| Failure::Validation(e.to_string()))?;
        let validation = validate_algebra(&sc);
        if !validation.is_valid() {
            return Err(Failure::Validation(validation.summary()));
        }
        let alg = doc.algebra().map_err(|e| Failure::Validation(e.to_string()))?;
        let orbit = OrbitData::compute(&alg).map_err(|e| Failure::Internal(e.to_string()))?;
        let lambda = match &doc.lambda {
            Some(decl) => Functional::from_decl(decl, alg.dim()),
            None => Functional::generic(alg.dim()),
        };
        let dilation = match &doc.dilation {
            Some(a) => Some(validate_dilation(&alg, a, &orbit.e).map_err(|e| Failure::Validation(e.to_string()))?),
            None => None,
        };
        let density = match &dilation {
            Some(s) if s.is_automorphism => {
                Some(s.density_profile(&alg).map_err(|e| Failure::Internal(e.to_string()))?)
            }
            _ => None,
        };
        let decomposition = match &dilation {
            Some(s) if s.is_automorphism => Some(classify(&alg, s, &orbit).map_err(|e| e.to_string())),
            _ => None,
        };
        let radical_criterion = coadjoint::radical(&alg, &lambda)
            .map_err(|e| e.to_string())
            .and_then(|r| bekka_driutti_check(&alg, &lambda, &r).map_err(|e| e.to_string()));
        let irreducibility = match (&dilation, &density, &decomposition) {
            (Some(s), Some(p), Some(Ok(r))) => {
                Some(fiber_irreducibility(r, s, &orbit, p, radical_criterion.as_ref().ok()))
            }
            _ => None,
        };
        let lattice_closes = doc.lattice.then(|| alg.lattice_closure_check());
        Ok(Analysis {
            doc,
            alg,
            validation,
            orbit,
            lambda,
            dilation,
            density,
            decomposition,
            radical_criterion,
            irreducibility,
            lattice_closes,
        })
    }

    pub fn from_text(text: &str) -> Result<Self, Failure> {
        Analysis::new(ingest(text)?)
    }

    pub fn names(&self) -> &[String] {
        self.alg.names()
    }

    pub fn require_automorphism(&self) -> Result<&DilationSpec, Failure> {
        match &self.dilation {
            None => Err(Failure::Precondition("no dilation declared".into())),
            Some(s) if !s.is_automorphism => Err(Failure::Validation(s.to_string())),
            Some(s) => Ok(s),
        }
    }

    pub fn require_decomposition(&self) -> Result<&DecompositionReport, Failure> {
        self.require_automorphism()?;
        match &self.decomposition {
            Some(Ok(r)) => Ok(r),
            Some(Err(e)) => Err(Failure::Precondition(e.clone())),
            None => Err(Failure::Internal("decomposition missing".into())),
        }
    }

    /// Rational point of the cross-section used by the identity checks:
    /// the declared rational λ if it is generic, otherwise a seeded draw.
    pub fn sample_point(&self, seed: u64) -> Result<Vec<Q>, Failure> {
        if let Some(v) = self.lambda.rational_values() {
            if self.orbit.in_generic_layer(&self.alg, &v) {
                return Ok(v);
            }
        }
        let n = self.alg.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidate: Vec<Q> = (0..n)
            .map(|k| if self.orbit.e.contains(&k) { Q::zero() } else { qi(1) })
            .collect();
        for _ in 0..256 {
            if self.orbit.in_cross_section(&self.alg, &candidate) {
                return Ok(candidate);
            }
            for &k in &self.orbit.lambda_coords {
                let mut v = 0;
                while v == 0 {
                    v = rng.gen_range(-5..=5);
                }
                candidate[k] = qi(v);
            }
        }
        Err(Failure::Internal("no generic cross-section point found".into()))
    }

    pub fn tiling_check(&self, opts: &Options) -> Result<VerificationReport, Failure> {
        let r = self.require_decomposition()?;
        let t = r
            .tiling
            .as_ref()
            .ok_or_else(|| Failure::Precondition("dilation acts trivially on Λ; no tiling".into()))?;
        Ok(t.verify(opts.tiling_samples, opts.seed))
    }

    pub fn identity_checks(&self, opts: &Options) -> Result<Vec<IdentityCheck>, Failure> {
        let point = self.sample_point(opts.seed)?;
        let samples = opts.identity_samples;
        let mut checks = Vec::new();
        let model = RepModel::new(&self.alg, &self.orbit, &point);
        checks.push(IdentityCheck {
            name: "homomorphism".into(),
            outcome: model
                .map_err(|e| e.to_string())
                .and_then(|m| verify_homomorphism(&m, samples, opts.seed).map_err(|e| e.to_string())),
            threshold: IDENTITY_TOL,
        });
        if let Ok(spec) = self.require_automorphism() {
            for m in -2..=2 {
                checks.push(IdentityCheck {
                    name: format!("intertwining m={m}"),
                    outcome: verify_intertwining(&self.alg, &self.orbit, spec, &point, m, samples, opts.seed)
                        .map_err(|e| e.to_string()),
                    threshold: IDENTITY_TOL,
                });
            }
            let ops = WaveletOps::new(&self.alg, spec);
            checks.push(IdentityCheck {
                name: "wavelet group law".into(),
                outcome: Ok(ops.verify_group_law(samples, opts.seed)),
                threshold: IDENTITY_TOL,
            });
            checks.push(IdentityCheck {
                name: "dilation conjugation".into(),
                outcome: Ok(ops.verify_dilation_conjugation(samples, opts.seed)),
                threshold: IDENTITY_TOL,
            });
            let outcome = if self.alg.dim() <= UNITARITY_MAX_DIM {
                let (norm, dilated) = ops.verify_unitarity(&TestFunction::probe(self.alg.dim()), 1e-6);
                Ok((norm.value - dilated.value).abs() / norm.value)
            } else {
                Err(format!("skipped for dimension above {UNITARITY_MAX_DIM}"))
            };
            checks.push(IdentityCheck {
                name: "D unitarity".into(),
                outcome,
                threshold: UNITARITY_TOL,
            });
        }
        Ok(checks)
    }

    pub fn validate_text(&self) -> String {
        let mut out = format!(
            "algebra: valid; dim {}; nilpotency class {}; derived algebra dim {}\n",
            self.alg.dim(),
            self.alg.nilpotency_class(),
            self.alg.derived_dim()
        );
        if let Some(s) = &self.dilation {
            let _ = writeln!(out, "dilation: {s}");
        }
        if let Some(ok) = self.lattice_closes {
            let _ = writeln!(out, "lattice: {}", if ok { "closed" } else { "not closed" });
        }
        out
    }

    pub fn orbit_text(&self) -> String {
        let vars = self.orbit.var_names();
        format!(
            "{}\nΩ: {}\nΛ: {}\npolarization: {}\n",
            self.orbit.summary(),
            self.orbit.omega_descriptor(),
            self.orbit.lambda_descriptor(),
            self.orbit.polarization.display_with(self.names(), &vars)
        )
    }

    pub fn dilation_text(&self) -> Result<String, Failure> {
        let s = self
            .dilation
            .as_ref()
            .ok_or_else(|| Failure::Precondition("no dilation declared".into()))?;
        let mut out = format!("{s}\n");
        if let Some(p) = &self.density {
            let _ = writeln!(out, "Γ_α: {}", p.summary());
            let _ = writeln!(out, "closure: {}", p.closure_descriptor(self.names()));
        }
        Ok(out)
    }

    pub fn classify_text(&self) -> Result<String, Failure> {
        let r = self.require_decomposition()?;
        let mut out = format!(
            "case {} ({})\nfiber: {}\nmultiplicity: {}\n|det A| = {}\n",
            r.case.number(),
            r.case.name(),
            r.fiber,
            r.multiplicity,
            r.det_modulus
        );
        if let Some(t) = &r.tiling {
            let _ = writeln!(out, "band: {}", t.describe());
        }
        for remark in &r.remarks {
            let _ = writeln!(out, "remark: {remark}");
        }
        if let Some(v) = &self.irreducibility {
            let _ = writeln!(out, "irreducibility: {} ({})", v.verdict, v.rule);
        }
        Ok(out)
    }

    pub fn tiling_text(&self, opts: &Options) -> Result<(String, bool), Failure> {
        let report = self.tiling_check(opts)?;
        let band = self
            .require_decomposition()?
            .tiling
            .as_ref()
            .map(|t| t.describe())
            .unwrap_or_default();
        Ok((
            format!("{band}\n{}\nseed: {}\n", report.summary(), report.seed),
            report.passed(),
        ))
    }

    pub fn irreducibility_text(&self) -> Result<String, Failure> {
        self.require_decomposition()?;
        let v = self
            .irreducibility
            .as_ref()
            .ok_or_else(|| Failure::Internal("irreducibility verdict missing".into()))?;
        let mut out = format!("{} ({})\n", v.verdict, v.rule);
        for e in &v.evidence {
            let _ = writeln!(out, "  {e}");
        }
        Ok(out)
    }

    pub fn identities_text(&self, opts: &Options) -> Result<(String, bool), Failure> {
        let checks = self.identity_checks(opts)?;
        let point = self.sample_point(opts.seed)?;
        let mut out = format!("λ = ({})\n", join(&point));
        for c in &checks {
            let _ = writeln!(out, "{}: {}", c.name, c.render());
        }
        let _ = writeln!(out, "seed: {}", opts.seed);
        Ok((out, checks.iter().all(|c| c.passed() || c.outcome.is_err())))
    }

    /// All entries of the structured report, plus whether every
    /// verification passed.
    pub fn entries(&self, opts: &Options) -> (BTreeMap<String, String>, bool) {
        let mut m = BTreeMap::new();
        let mut ok = true;
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("algebra.basis", self.names().join(" "));
        put("algebra.derived_dim", self.alg.derived_dim().to_string());
        put("algebra.dim", self.alg.dim().to_string());
        put("algebra.nilpotency_class", self.alg.nilpotency_class().to_string());
        put("algebra.validation", self.validation.summary());
        if let Some(l) = self.lattice_closes {
            put("algebra.lattice", if l { "closed" } else { "not closed" }.into());
        }
        put("orbit.e", format_index_set(&self.orbit.e));
        put("orbit.j", format_index_set(&self.orbit.j));
        put("orbit.d", self.orbit.d.to_string());
        put("orbit.pfaffian", monomials(&self.orbit));
        put("orbit.pfaffian_text", self.orbit.pfaffian_text());
        put("orbit.cross_section", self.orbit.lambda_descriptor());
        put("lambda.mode", self.lambda.mode_name().into());
        put("lambda.value", self.lambda.to_string());
        match &self.radical_criterion {
            Ok(b) => {
                put("radical_criterion.verdict", format!("{:?}", b.verdict));
                put("radical_criterion.evidence", b.evidence.clone());
            }
            Err(e) => put("radical_criterion.verdict", format!("n/a: {e}")),
        }
        match &self.dilation {
            None => put("dilation", "none".into()),
            Some(s) => {
                put("dilation.a", join(&s.a));
                put("dilation.automorphism", s.is_automorphism.to_string());
                put("dilation.expansive", s.is_expansive.to_string());
                put("dilation.trivial_on_lambda", s.acts_trivially_on_lambda.to_string());
                put("dilation.det_modulus", s.det_modulus.to_string());
                if !s.is_automorphism {
                    ok = false;
                }
            }
        }
        if let Some(p) = &self.density {
            put("density.summary", p.summary());
            put("density.closure", p.closure_descriptor(self.names()));
        }
        match &self.decomposition {
            None => {}
            Some(Err(e)) => put("decomposition.case", format!("n/a: {e}")),
            Some(Ok(r)) => {
                put("decomposition.case", r.case.number().to_string());
                put("decomposition.name", r.case.name().into());
                put("decomposition.fiber", r.fiber.into());
                put("decomposition.multiplicity", r.multiplicity.to_string());
                if !r.remarks.is_empty() {
                    put("decomposition.remarks", r.remarks.join("; "));
                }
                if let Some(t) = &r.tiling {
                    put("tiling.band", t.describe());
                }
            }
        }
        if let Some(v) = &self.irreducibility {
            put("irreducibility.verdict", v.verdict.to_string());
            put("irreducibility.rule", v.rule.into());
            put("irreducibility.evidence", v.evidence.join("; "));
        }
        put("verification.seed", opts.seed.to_string());
        match self.tiling_check(opts) {
            Ok(r) => {
                ok &= r.passed();
                put("verification.tiling", r.summary());
            }
            Err(e) => put("verification.tiling", format!("n/a: {e}")),
        }
        match self.identity_checks(opts) {
            Ok(checks) => {
                for c in checks {
                    ok &= c.passed() || c.outcome.is_err();
                    put(&format!("verification.{}", c.name.replace(' ', "_")), c.render());
                }
            }
            Err(e) => put("verification.identities", format!("n/a: {e}")),
        }
        put("spec", self.doc.to_canonical_text());
        (m, ok)
    }

    pub fn structured(&self, opts: &Options) -> (String, bool) {
        let (entries, ok) = self.entries(opts);
        let mut out = format!("{STRUCTURED_HEADER}\n");
        for (k, v) in entries {
            if v.contains('\n') {
                let _ = writeln!(out, "{k}: |");
                for line in v.lines() {
                    let _ = writeln!(out, "  {line}");
                }
            } else {
                let _ = writeln!(out, "{k}: {v}");
            }
        }
        (out, ok)
    }

    pub fn text(&self, opts: &Options) -> (String, bool) {
        let (entries, ok) = self.entries(opts);
        let mut out = String::new();
        let mut section = "";
        for (k, v) in &entries {
            if k == "spec" {
                continue;
            }
            let (head, tail) = k.split_once('.').unwrap_or((k.as_str(), ""));
            if head != section {
                let _ = writeln!(out, "{head}");
                section = head;
            }
            let label = if tail.is_empty() { head } else { tail };
            let _ = writeln!(out, "  {label}: {v}");
        }
        (out, ok)
    }
}

fn join(v: &[Q]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Sparse monomial list `coefficient*exponents` of the Pfaffian.
fn monomials(orbit: &OrbitData) -> String {
    let items: Vec<String> = orbit
        .pfaffian
        .monomial_list(orbit.n)
        .iter()
        .map(|(c, exps)| {
            let e: Vec<String> = exps.iter().map(|x| x.to_string()).collect();
            format!("{c}*[{}]", e.join(","))
        })
        .collect();
    format!("[{}]", items.join(" "))
}
