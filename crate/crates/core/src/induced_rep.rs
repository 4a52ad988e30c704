//! Pointwise model of the induced representations `π_λ` on `ℝ^d`, the
//! intertwiner `C(α)`, and the wavelet operators `T`, `D`, `V` on `N`.
//!
//! Group elements are handled exactly through their logarithms. Only the
//! final phase `e^{-2πiλ(p)}` and the test-function values are floating
//! point; the phase argument is reduced modulo one in exact arithmetic
//! first.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraError, LieAlgebra, ProductChart, VectorQ};
use crate::coadjoint::{self, Functional, OrbitData, OrbitError};
use crate::dilation::{qpow, DilationSpec};
use crate::linalg;
use crate::quadrature::{integrate_adaptive, QuadratureResult};
use crate::{q, to_f64, Q};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("λ is not in the generic layer")]
    NotInGenericLayer,
    #[error("factorization failed: {0}")]
    FactorizationFailed(String),
    #[error("λ must be rational")]
    NotRational,
}

impl From<AlgebraError> for RepError {
    fn from(e: AlgebraError) -> Self {
        RepError::FactorizationFailed(e.to_string())
    }
}

/// A function evaluated at rational points.
pub trait Waveform: Sync {
    fn eval(&self, t: &[Q]) -> Complex64;
}

/// Gaussian bumps and polynomial multiples of them.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    /// `exp(-π|x-c|²/w²) · e^{2πi⟨ξ,x⟩}`.
    Gaussian {
        center: Vec<f64>,
        width: f64,
        freq: Vec<f64>,
    },
    /// `Σ c_β x^β · exp(-π|x-c|²/w²)`.
    PolyGaussian {
        terms: Vec<(f64, Vec<u32>)>,
        center: Vec<f64>,
        width: f64,
    },
}

impl TestFunction {
    pub fn gaussian(dim: usize) -> Self {
        TestFunction::Gaussian {
            center: vec![0.0; dim],
            width: 1.0,
            freq: vec![0.0; dim],
        }
    }

    /// Modulated, off-center Gaussian so that phase and translation errors
    /// are visible.
    pub fn probe(dim: usize) -> Self {
        TestFunction::Gaussian {
            center: (0..dim).map(|i| 0.25 * (i as f64 + 1.0)).collect(),
            width: 2.0,
            freq: (0..dim).map(|i| 0.3 - 0.1 * i as f64).collect(),
        }
    }

    fn envelope(center: &[f64], width: f64, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
        (-PI * r2 / (width * width)).exp()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Complex64 {
        match self {
            TestFunction::Gaussian { center, width, freq } => {
                let phase: f64 = x.iter().zip(freq).map(|(a, b)| a * b).sum();
                Complex64::from_polar(Self::envelope(center, *width, x), 2.0 * PI * phase)
            }
            TestFunction::PolyGaussian { terms, center, width } => {
                let poly: f64 = terms
                    .iter()
                    .map(|(c, exps)| c * exps.iter().zip(x).map(|(e, xi)| xi.powi(*e as i32)).product::<f64>())
                    .sum();
                Complex64::new(poly * Self::envelope(center, *width, x), 0.0)
            }
        }
    }

    /// Radius beyond which the envelope is below `1e-14`.
    pub fn support_radius(&self) -> f64 {
        let (center, width) = match self {
            TestFunction::Gaussian { center, width, .. } => (center, width),
            TestFunction::PolyGaussian { center, width, .. } => (center, width),
        };
        let c = center.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        c + width * (14.0 * 10f64.ln() / PI).sqrt() + 1.0
    }
}

impl Waveform for TestFunction {
    fn eval(&self, t: &[Q]) -> Complex64 {
        let x: Vec<f64> = t.iter().map(to_f64).collect();
        self.eval_f64(&x)
    }
}

/// `e^{2πi x}` with `x` reduced modulo one exactly.
pub fn unit_phase(x: &Q) -> Complex64 {
    let frac = x - x.floor();
    Complex64::from_polar(1.0, 2.0 * PI * to_f64(&frac))
}

/// `π_λ` realized on functions of `t ∈ ℝ^d` through
/// `n(t) = exp t_1X_{j_1} ··· exp t_dX_{j_d}`.
#[derive(Clone, Debug)]
pub struct RepModel<'a> {
    alg: &'a LieAlgebra,
    lambda: Vec<Q>,
    j: Vec<usize>,
    chart: ProductChart,
    /// Polarization basis indexed by leading index.
    polarization: Vec<(usize, VectorQ)>,
}

impl<'a> RepModel<'a> {
    pub fn new(alg: &'a LieAlgebra, orbit: &OrbitData, lambda: &[Q]) -> Result<Self, RepError> {
        let n = alg.dim();
        if orbit.pfaffian.eval(lambda).is_zero() {
            return Err(RepError::NotInGenericLayer);
        }
        let func = Functional::rational(lambda.to_vec());
        let pol = match coadjoint::vergne_polarization(alg, orbit, &func) {
            Ok(p) => p,
            Err(OrbitError::NotInGenericLayer { .. }) => return Err(RepError::NotInGenericLayer),
            Err(e) => return Err(e.into()),
        };
        let basis = pol.rational_basis().ok_or(RepError::NotRational)?;
        let polarization = lead_normalized(&basis, n);
        let leads: Vec<usize> = polarization.iter().map(|(k, _)| *k).collect();
        let expected: Vec<usize> = (0..n).filter(|k| !orbit.j.contains(k)).collect();
        if leads != expected {
            return Err(RepError::FactorizationFailed(format!(
                "polarization leading indices {} do not complement j",
                crate::format_index_set(&leads)
            )));
        }
        let mut factors: Vec<Vec<(usize, VectorQ)>> =
            orbit.j.iter().map(|&k| vec![(k, VectorQ::basis(n, k))]).collect();
        factors.push(polarization.clone());
        let chart = ProductChart::new(n, factors)?;
        Ok(RepModel {
            alg,
            lambda: lambda.to_vec(),
            j: orbit.j.clone(),
            chart,
            polarization,
        })
    }

    pub fn lambda(&self) -> &[Q] {
        &self.lambda
    }

    pub fn d(&self) -> usize {
        self.j.len()
    }

    pub fn algebra(&self) -> &LieAlgebra {
        self.alg
    }

    /// `log n(t)`.
    pub fn section(&self, t: &[Q]) -> VectorQ {
        let n = self.alg.dim();
        let factors: Vec<VectorQ> = self
            .j
            .iter()
            .zip(t)
            .map(|(&k, tk)| VectorQ::basis(n, k).scale(tk))
            .collect();
        self.alg.product(&factors)
    }

    pub fn lambda_of(&self, p: &VectorQ) -> Q {
        self.lambda.iter().zip(&p.0).map(|(a, b)| a * b).sum()
    }

    /// `(t', p)` with `y⁻¹ n(t) = n(t') exp(p)` and `p ∈ 𝔭(λ)`, where `y`
    /// is given by its logarithm.
    pub fn factorize(&self, y: &VectorQ, t: &[Q]) -> Result<(Vec<Q>, VectorQ), RepError> {
        let target = self.alg.bch(&y.neg(), &self.section(t));
        let coeffs = self.chart.solve(self.alg, &target)?;
        let t_new: Vec<Q> = self.j.iter().map(|&k| coeffs[k].clone()).collect();
        let p = self
            .polarization
            .iter()
            .fold(VectorQ::zeros(self.alg.dim()), |acc, (k, v)| {
                acc.add(&v.scale(&coeffs[*k]))
            });
        let residual = self.alg.bch(&self.section(&t_new).neg(), &target);
        if residual != p {
            return Err(RepError::FactorizationFailed(
                "residual is not the polarization part".into(),
            ));
        }
        Ok((t_new, p))
    }

    /// `(π_λ(y) f)(t) = e^{-2πiλ(p)} f(t')`.
    pub fn evaluate_pi(&self, y: &VectorQ, f: &dyn Waveform, t: &[Q]) -> Result<Complex64, RepError> {
        let (t_new, p) = self.factorize(y, t)?;
        Ok(unit_phase(&-self.lambda_of(&p)) * f.eval(&t_new))
    }
}

/// Basis of the span with distinct leading (highest nonzero) indices, each
/// vector having coordinate one at its leading index and zeros at the
/// other leading indices. Sorted by leading index.
fn lead_normalized(basis: &[VectorQ], n: usize) -> Vec<(usize, VectorQ)> {
    let reversed: Vec<Vec<Q>> = basis.iter().map(|v| v.0.iter().rev().cloned().collect()).collect();
    let (rows, pivots) = linalg::rref_q(&reversed, n);
    let mut out: Vec<(usize, VectorQ)> = rows
        .into_iter()
        .zip(pivots)
        .map(|(row, p)| (n - 1 - p, VectorQ(row.into_iter().rev().collect())))
        .collect();
    out.sort_by_key(|(k, _)| *k);
    out
}

/// `π_λ(y) f` as a waveform.
pub struct Represented<'m, 'a> {
    pub model: &'m RepModel<'a>,
    pub y: VectorQ,
    pub inner: &'m dyn Waveform,
}

impl Waveform for Represented<'_, '_> {
    fn eval(&self, t: &[Q]) -> Complex64 {
        self.model
            .evaluate_pi(&self.y, self.inner, t)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

/// `C(α^m) g (t) = |∏ a_{j_i}^m|^{1/2} g(a_{j_1}^m t_1, ..)`.
pub struct Intertwined<'m> {
    pub scales: Vec<Q>,
    pub factor: f64,
    pub inner: &'m dyn Waveform,
}

pub fn intertwiner_c<'m>(spec: &DilationSpec, j: &[usize], m: i64, f: &'m dyn Waveform) -> Intertwined<'m> {
    let scales: Vec<Q> = j.iter().map(|&k| qpow(&spec.a[k], m)).collect();
    let prod: Q = scales.iter().fold(Q::one(), |acc, s| acc * s).abs();
    Intertwined {
        factor: to_f64(&prod).sqrt(),
        scales,
        inner: f,
    }
}

impl Waveform for Intertwined<'_> {
    fn eval(&self, t: &[Q]) -> Complex64 {
        let s: Vec<Q> = t.iter().zip(&self.scales).map(|(x, a)| x * a).collect();
        self.inner.eval(&s) * self.factor
    }
}

fn random_q(rng: &mut ChaCha8Rng, bound: i64, denom: i64) -> Q {
    q(rng.gen_range(-bound * denom..=bound * denom), denom)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> VectorQ {
    VectorQ((0..n).map(|_| random_q(rng, 2, 16)).collect())
}

fn random_point(rng: &mut ChaCha8Rng, d: usize) -> Vec<Q> {
    (0..d).map(|_| random_q(rng, 2, 16)).collect()
}

/// Max discrepancy of `C(α^m)π_λ(α^m(y)) = π_{A^mλ}(y)C(α^m)` over random
/// `(y, t)`.
pub fn verify_intertwining(
    alg: &LieAlgebra,
    orbit: &OrbitData,
    spec: &DilationSpec,
    lambda: &[Q],
    m: i64,
    samples: usize,
    seed: u64,
) -> Result<f64, RepError> {
    let model = RepModel::new(alg, orbit, lambda)?;
    let scaled: Vec<Q> = lambda.iter().zip(spec.power(m)).map(|(l, a)| l * a).collect();
    let model_m = RepModel::new(alg, orbit, &scaled)?;
    let f = TestFunction::probe(orbit.d);
    let cf = intertwiner_c(spec, &orbit.j, m, &f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let y = random_vector(&mut rng, alg.dim());
        let t = random_point(&mut rng, orbit.d);
        let inner = Represented {
            model: &model,
            y: spec.apply(&y, m),
            inner: &f,
        };
        let lhs = intertwiner_c(spec, &orbit.j, m, &inner).eval(&t);
        let rhs = model_m.evaluate_pi(&y, &cf, &t)?;
        worst = worst.max(nan_max((lhs - rhs).norm()));
    }
    Ok(worst)
}

fn nan_max(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x
    }
}

/// Max discrepancy of `π(y_1 y_2) f = π(y_1) π(y_2) f` over random samples.
pub fn verify_homomorphism(model: &RepModel, samples: usize, seed: u64) -> Result<f64, RepError> {
    let alg = model.algebra();
    let f = TestFunction::probe(model.d());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let y1 = random_vector(&mut rng, alg.dim());
        let y2 = random_vector(&mut rng, alg.dim());
        let t = random_point(&mut rng, model.d());
        let lhs = model.evaluate_pi(&alg.bch(&y1, &y2), &f, &t)?;
        let inner = Represented {
            model,
            y: y2,
            inner: &f,
        };
        let rhs = model.evaluate_pi(&y1, &inner, &t)?;
        worst = worst.max(nan_max((lhs - rhs).norm()));
    }
    Ok(worst)
}

/// Wavelet operators on functions of `N` in first-kind coordinates.
pub struct WaveletOps<'a> {
    pub alg: &'a LieAlgebra,
    pub spec: &'a DilationSpec,
}

/// `(T_x f)(y) = f(x⁻¹ y)`.
pub struct Translated<'m> {
    alg: &'m LieAlgebra,
    x: VectorQ,
    inner: &'m dyn Waveform,
}

impl Waveform for Translated<'_> {
    fn eval(&self, y: &[Q]) -> Complex64 {
        let z = self.alg.bch(&self.x.neg(), &VectorQ(y.to_vec()));
        self.inner.eval(&z.0)
    }
}

/// `(D^m f)(x) = |det A|^{m/2} f(α^m x)`.
pub struct Dilated<'m> {
    scales: Vec<Q>,
    factor: f64,
    inner: &'m dyn Waveform,
}

impl Waveform for Dilated<'_> {
    fn eval(&self, x: &[Q]) -> Complex64 {
        let s: Vec<Q> = x.iter().zip(&self.scales).map(|(a, b)| a * b).collect();
        self.inner.eval(&s) * self.factor
    }
}

impl<'a> WaveletOps<'a> {
    pub fn new(alg: &'a LieAlgebra, spec: &'a DilationSpec) -> Self {
        WaveletOps { alg, spec }
    }

    pub fn translate<'m>(&'m self, x: &VectorQ, f: &'m dyn Waveform) -> Translated<'m> {
        Translated {
            alg: self.alg,
            x: x.clone(),
            inner: f,
        }
    }

    pub fn dilate<'m>(&'m self, m: i64, f: &'m dyn Waveform) -> Dilated<'m> {
        Dilated {
            scales: self.spec.power(m),
            factor: to_f64(&self.spec.det_modulus).powf(m as f64 / 2.0),
            inner: f,
        }
    }

    /// `V(x, α^m) f = T_x D^m f`, evaluated at `y`.
    pub fn v_eval(&self, x: &VectorQ, m: i64, f: &dyn Waveform, y: &[Q]) -> Complex64 {
        let d = self.dilate(m, f);
        self.translate(x, &d).eval(y)
    }

    /// `(x_1, α^{m_1})(x_2, α^{m_2}) = (x_1 α^{-m_1}(x_2), α^{m_1+m_2})`.
    pub fn compose(&self, g1: &(VectorQ, i64), g2: &(VectorQ, i64)) -> (VectorQ, i64) {
        let moved = self.spec.apply(&g2.0, -g1.1);
        (self.alg.bch(&g1.0, &moved), g1.1 + g2.1)
    }

    /// Max discrepancy of `V(g_1)V(g_2) f = V(g_1 g_2) f`.
    pub fn verify_group_law(&self, samples: usize, seed: u64) -> f64 {
        let n = self.alg.dim();
        let f = TestFunction::probe(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let g1 = (random_vector(&mut rng, n), rng.gen_range(-2..=2));
            let g2 = (random_vector(&mut rng, n), rng.gen_range(-2..=2));
            let g = self.compose(&g1, &g2);
            // y = x·α^{-m}(z) keeps α^m(x⁻¹y) = z in the bulk of f.
            let z = random_vector(&mut rng, n);
            let y = self.alg.bch(&g.0, &self.spec.apply(&z, -g.1));
            let d2 = self.dilate(g2.1, &f);
            let v2 = self.translate(&g2.0, &d2);
            let lhs = self.v_eval(&g1.0, g1.1, &v2, &y.0);
            let rhs = self.v_eval(&g.0, g.1, &f, &y.0);
            worst = worst.max(nan_max((lhs - rhs).norm()));
        }
        worst
    }

    /// Max discrepancy of `D T_γ D⁻¹ = T_{α⁻¹(γ)}`.
    pub fn verify_dilation_conjugation(&self, samples: usize, seed: u64) -> f64 {
        let n = self.alg.dim();
        let f = TestFunction::probe(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let gamma = random_vector(&mut rng, n);
            let shifted = self.spec.apply(&gamma, -1);
            let y = self.alg.bch(&shifted, &random_vector(&mut rng, n));
            let dinv = self.dilate(-1, &f);
            let t = self.translate(&gamma, &dinv);
            let lhs = self.dilate(1, &t).eval(&y.0);
            let rhs = self.translate(&shifted, &f).eval(&y.0);
            worst = worst.max(nan_max((lhs - rhs).norm()));
        }
        worst
    }

    /// `(‖f‖², ‖Df‖²)` by quadrature, for a test function on `N`.
    pub fn verify_unitarity(&self, f: &TestFunction, tol: f64) -> (QuadratureResult, QuadratureResult) {
        let n = self.alg.dim();
        let a: Vec<f64> = self.spec.a.iter().map(to_f64).collect();
        let det = to_f64(&self.spec.det_modulus);
        let r = f.support_radius();
        let norm = integrate_adaptive(&|x: &[f64]| f.eval_f64(x).norm_sqr(), &vec![r; n], tol);
        // Not an exact rescaling of the first box, so the nodes differ.
        let boxes: Vec<f64> = a.iter().map(|ak| 1.25 * r / ak.abs()).collect();
        let dilated = integrate_adaptive(
            &|x: &[f64]| {
                let ax: Vec<f64> = x.iter().zip(&a).map(|(xi, ai)| xi * ai).collect();
                det * f.eval_f64(&ax).norm_sqr()
            },
            &boxes,
            tol,
        );
        (norm, dilated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::validate_dilation;
    use crate::{catalog, qi};

    fn setup(name: &str) -> (LieAlgebra, OrbitData) {
        let alg = catalog::document(name).unwrap().algebra().unwrap();
        let o = OrbitData::compute(&alg).unwrap();
        (alg, o)
    }

    #[test]
    fn identity_factorizes_trivially() {
        let (h, o) = setup("heisenberg");
        let model = RepModel::new(&h, &o, &[qi(3), qi(0), qi(0)]).unwrap();
        let t = vec![q(5, 7)];
        let (t2, p) = model.factorize(&VectorQ::zeros(3), &t).unwrap();
        assert_eq!(t2, t);
        assert!(p.is_zero());
        let f = TestFunction::probe(1);
        assert_eq!(model.evaluate_pi(&VectorQ::zeros(3), &f, &t).unwrap(), f.eval(&t));
    }

    #[test]
    fn heisenberg_translation_direction() {
        let (h, o) = setup("heisenberg");
        let model = RepModel::new(&h, &o, &[qi(1), qi(0), qi(0)]).unwrap();
        let (t2, p) = model
            .factorize(&VectorQ(vec![qi(0), qi(0), q(1, 3)]), &[qi(2)])
            .unwrap();
        assert_eq!(t2, vec![q(5, 3)]);
        assert!(p.is_zero());
    }

    #[test]
    fn five_dim_phase_matches_closed_form() {
        let (g, o) = setup("five_dim");
        let (l1, l2, b2) = (qi(2), q(-1, 3), q(3, 4));
        let model = RepModel::new(&g, &o, &[l1, l2.clone(), qi(0), b2.clone(), qi(0)]).unwrap();
        let x2 = q(5, 2);
        let t = q(-2, 7);
        let (t2, p) = model
            .factorize(
                &VectorQ(vec![qi(0), qi(0), qi(0), x2.clone(), qi(0)]),
                std::slice::from_ref(&t),
            )
            .unwrap();
        assert_eq!(t2, vec![t.clone()]);
        assert_eq!(model.lambda_of(&p), -(x2 * (b2 + t * l2)));
    }

    #[test]
    fn singular_lambda_is_rejected() {
        let (h, o) = setup("heisenberg");
        assert_eq!(
            RepModel::new(&h, &o, &[qi(0), qi(1), qi(0)]).unwrap_err(),
            RepError::NotInGenericLayer
        );
    }

    #[test]
    fn intertwiner_on_heisenberg() {
        let (h, o) = setup("heisenberg");
        let f = TestFunction::probe(1);
        let s = validate_dilation(&h, &[qi(2), qi(2), qi(1)], &o.e).unwrap();
        let c = intertwiner_c(&s, &o.j, 1, &f);
        assert_eq!(c.eval(&[q(1, 3)]), f.eval(&[q(1, 3)]));
        let s = validate_dilation(&h, &[qi(4), qi(2), qi(2)], &o.e).unwrap();
        let c = intertwiner_c(&s, &o.j, 1, &f);
        let expect = f.eval(&[q(2, 3)]) * 2f64.sqrt();
        assert!((c.eval(&[q(1, 3)]) - expect).norm() < 1e-15);
        assert_eq!(intertwiner_c(&s, &o.j, 0, &f).eval(&[q(1, 3)]), f.eval(&[q(1, 3)]));
    }

    #[test]
    fn intertwining_identity_holds() {
        let (h, o) = setup("heisenberg");
        let s = validate_dilation(&h, &[qi(4), qi(2), qi(2)], &o.e).unwrap();
        for m in -2..=2 {
            let err = verify_intertwining(&h, &o, &s, &[qi(1), qi(0), qi(0)], m, 50, 1).unwrap();
            assert!(err < 1e-9, "m = {m}: {err}");
        }
    }

    #[test]
    fn homomorphism_on_heisenberg() {
        let (h, o) = setup("heisenberg");
        let model = RepModel::new(&h, &o, &[q(-3, 2), qi(0), qi(0)]).unwrap();
        assert!(verify_homomorphism(&model, 50, 2).unwrap() < 1e-9);
    }

    #[test]
    fn dyadic_dilation_on_the_line() {
        let alg = LieAlgebra::new(crate::StructureConstants::new(1)).unwrap();
        let s = validate_dilation(&alg, &[qi(2)], &[]).unwrap();
        let ops = WaveletOps::new(&alg, &s);
        let f = TestFunction::probe(1);
        let x = q(3, 8);
        let d = ops.dilate(1, &f).eval(std::slice::from_ref(&x));
        assert!((d - f.eval(&[x * qi(2)]) * 2f64.sqrt()).norm() < 1e-15);
        let id = ops.v_eval(&VectorQ::zeros(1), 0, &f, &[q(1, 5)]);
        assert_eq!(id, f.eval(&[q(1, 5)]));
    }

    #[test]
    fn wavelet_identities_on_heisenberg() {
        let (h, o) = setup("heisenberg");
        let s = validate_dilation(&h, &[qi(4), qi(2), qi(2)], &o.e).unwrap();
        let ops = WaveletOps::new(&h, &s);
        assert!(ops.verify_group_law(50, 3) < 1e-9);
        assert!(ops.verify_dilation_conjugation(50, 4) < 1e-9);
    }

    #[test]
    fn dilation_is_unitary_on_heisenberg() {
        let (h, o) = setup("heisenberg");
        let s = validate_dilation(&h, &[qi(4), qi(2), qi(2)], &o.e).unwrap();
        let (norm, dilated) = WaveletOps::new(&h, &s).verify_unitarity(&TestFunction::probe(3), 1e-6);
        assert!((norm.value - 2f64.powf(1.5)).abs() < 1e-6, "{norm:?}");
        assert!((norm.value - dilated.value).abs() < 1e-3, "{dilated:?}");
    }

    #[test]
    fn naive_composition_is_detected() {
        let (h, o) = setup("heisenberg");
        let s = validate_dilation(&h, &[qi(4), qi(2), qi(2)], &o.e).unwrap();
        let ops = WaveletOps::new(&h, &s);
        let f = TestFunction::probe(3);
        let g1 = (VectorQ(vec![qi(0), qi(0), q(1, 2)]), 1);
        let g2 = (VectorQ(vec![qi(0), q(1, 3), qi(0)]), 0);
        let y = [q(1, 4), q(-1, 5), q(1, 7)];
        let d2 = ops.dilate(g2.1, &f);
        let v2 = ops.translate(&g2.0, &d2);
        let lhs = ops.v_eval(&g1.0, g1.1, &v2, &y);
        let naive = ops.v_eval(&h.bch(&g1.0, &g2.0), g1.1 + g2.1, &f, &y);
        let g = ops.compose(&g1, &g2);
        assert!((lhs - naive).norm() > 1e-6);
        assert!((lhs - ops.v_eval(&g.0, g.1, &f, &y)).norm() < 1e-12);
    }
}
