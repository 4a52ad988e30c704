//! Band tilings of the cross-section and their Monte Carlo verification.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coadjoint::OrbitData;
use crate::dilation::DilationSpec;
use crate::poly::Poly;
use crate::{q, to_f64, Q};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TilingError {
    #[error("dilation acts trivially on the cross-section; no band pivot exists")]
    TrivialAction,
    #[error("not an automorphism")]
    NotAutomorphism,
    #[error("pivot coordinate λ{0} is zero")]
    ZeroPivotCoordinate(usize),
}

/// `E = { λ ∈ Λ : min(1,c) ≤ |λ_{k*}| < max(1,c) }`.
#[derive(Clone, Debug, PartialEq)]
pub struct TilingSpec {
    pub pivot: usize,
    pub scale: Q,
    pub a: Vec<Q>,
    pub e: Vec<usize>,
    /// Pfaffian restricted to the cross-section; samples avoid its zeros.
    pub pfaffian: Poly,
}

pub fn make_shannon_tiling(spec: &DilationSpec, orbit: &OrbitData) -> Result<TilingSpec, TilingError> {
    if !spec.is_automorphism {
        return Err(TilingError::NotAutomorphism);
    }
    let pivot = orbit
        .lambda_coords
        .iter()
        .copied()
        .find(|&k| !spec.a[k].abs().is_one())
        .ok_or(TilingError::TrivialAction)?;
    Ok(TilingSpec {
        pivot,
        scale: spec.a[pivot].abs(),
        a: spec.a.clone(),
        e: orbit.e.clone(),
        pfaffian: orbit.pfaffian_on_cross_section(),
    })
}

impl TilingSpec {
    pub fn lower(&self) -> Q {
        self.scale.clone().min(Q::one())
    }

    pub fn upper(&self) -> Q {
        self.scale.clone().max(Q::one())
    }

    pub fn band_contains(&self, v: &Q) -> bool {
        let v = v.abs();
        self.lower() <= v && v < self.upper()
    }

    pub fn contains(&self, lambda: &[Q]) -> bool {
        self.band_contains(&lambda[self.pivot])
    }

    /// Pivot coordinate of `A^{-m} λ`.
    fn shifted(&self, v: &Q, m: i64) -> Q {
        v * crate::dilation::qpow(&self.a[self.pivot], -m)
    }

    /// The unique `m` with `A^{-m} λ ∈ E`.
    pub fn tile_index(&self, lambda: &[Q]) -> Result<i64, TilingError> {
        let v = lambda[self.pivot].abs();
        if v.is_zero() {
            return Err(TilingError::ZeroPivotCoordinate(self.pivot + 1));
        }
        let c = &self.scale;
        let estimate = log_estimate(&v, c);
        let mut m = estimate;
        let mut w = &v * crate::dilation::qpow(c, -m);
        let (lo, hi) = (self.lower(), self.upper());
        // w = c^{-m}|λ_{k*}|; raising m divides by c
        loop {
            if w < lo {
                if c > &Q::one() {
                    m -= 1;
                    w *= c;
                } else {
                    m += 1;
                    w /= c;
                }
            } else if w >= hi {
                if c > &Q::one() {
                    m += 1;
                    w /= c;
                } else {
                    m -= 1;
                    w *= c;
                }
            } else {
                return Ok(m);
            }
        }
    }

    pub fn describe(&self) -> String {
        format!("E = {{{} ≤ |λ{}| < {}}}", self.lower(), self.pivot + 1, self.upper())
    }

    /// Draw `samples` points of `Λ` and check that each lies in exactly one
    /// tile. Independent ChaCha streams per chunk keep the result
    /// independent of the thread count.
    pub fn verify(&self, samples: usize, seed: u64) -> VerificationReport {
        let n = self.a.len();
        let chunks = samples.div_ceil(CHUNK);
        let per_chunk: Vec<(usize, i64)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(c as u64);
                let count = CHUNK.min(samples - c * CHUNK);
                let mut failures = 0;
                let mut max_index = 0i64;
                for _ in 0..count {
                    let lambda = self.sample(&mut rng, n);
                    match self.tile_index(&lambda) {
                        Ok(m) => {
                            max_index = max_index.max(m.abs());
                            if !self.check_unique(&lambda, m) {
                                failures += 1;
                            }
                        }
                        Err(_) => failures += 1,
                    }
                }
                (failures, max_index)
            })
            .collect();
        VerificationReport {
            samples,
            failures: per_chunk.iter().map(|p| p.0).sum(),
            max_abs_index: per_chunk.iter().map(|p| p.1).max().unwrap_or(0),
            seed,
        }
    }

    fn check_unique(&self, lambda: &[Q], m: i64) -> bool {
        let v = &lambda[self.pivot];
        self.band_contains(&self.shifted(v, m))
            && !self.band_contains(&self.shifted(v, m - 1))
            && !self.band_contains(&self.shifted(v, m + 1))
    }

    /// Uniform point of the dyadic grid `2^-10 ℤ ∩ [-8, 8]` on the free
    /// coordinates, resampled until the pivot and the Pfaffian are nonzero.
    pub fn sample(&self, rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
        loop {
            let lambda: Vec<Q> = (0..n)
                .map(|k| {
                    if self.e.contains(&k) {
                        Q::zero()
                    } else {
                        q(rng.gen_range(-GRID..=GRID), GRID / 8)
                    }
                })
                .collect();
            if !lambda[self.pivot].is_zero() && !self.pfaffian.eval(&lambda).is_zero() {
                return lambda;
            }
        }
    }
}

const CHUNK: usize = 1024;
const GRID: i64 = 8 * 1024;

fn log_estimate(v: &Q, c: &Q) -> i64 {
    let (lv, lc) = (to_f64(v).ln(), to_f64(c).ln());
    let est = (lv / lc).floor();
    if est.is_finite() && est.abs() < 1e6 {
        est as i64
    } else {
        0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub samples: usize,
    pub failures: usize,
    pub max_abs_index: i64,
    pub seed: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary(&self) -> String {
        format!("{} failures / {}", self.failures, self.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::dilation::validate_dilation;
    use crate::{catalog, qi};

    fn setup(name: &str, a: &[Q]) -> (LieAlgebra, OrbitData, DilationSpec) {
        let alg = catalog::document(name).unwrap().algebra().unwrap();
        let o = OrbitData::compute(&alg).unwrap();
        let s = validate_dilation(&alg, a, &o.e).unwrap();
        (alg, o, s)
    }

    #[test]
    fn heisenberg_band() {
        let (_, o, s) = setup("heisenberg", &[qi(2), qi(2), qi(1)]);
        let t = make_shannon_tiling(&s, &o).unwrap();
        assert_eq!((t.pivot, t.scale.clone()), (0, qi(2)));
        assert_eq!(t.describe(), "E = {1 ≤ |λ1| < 2}");
        let at = |v: Q| t.tile_index(&[v, qi(0), qi(0)]);
        assert_eq!(at(qi(1)), Ok(0));
        assert_eq!(at(qi(3)), Ok(1));
        assert_eq!(at(q(-1, 2)), Ok(-1));
        assert_eq!(at(qi(0)), Err(TilingError::ZeroPivotCoordinate(1)));
    }

    #[test]
    fn trivial_action_has_no_band() {
        let (_, o, s) = setup("heisenberg", &[qi(1), q(1, 2), qi(2)]);
        assert_eq!(make_shannon_tiling(&s, &o), Err(TilingError::TrivialAction));
    }

    #[test]
    fn contracting_pivot_uses_lower_band() {
        let (_, o, s) = setup("heisenberg", &[q(1, 4), q(1, 2), q(1, 2)]);
        let t = make_shannon_tiling(&s, &o).unwrap();
        assert_eq!((t.lower(), t.upper()), (q(1, 4), qi(1)));
        assert_eq!(t.tile_index(&[qi(1), qi(0), qi(0)]), Ok(-1));
        assert_eq!(t.tile_index(&[q(1, 4), qi(0), qi(0)]), Ok(0));
        assert!(t.verify(2000, 3).passed());
    }

    #[test]
    fn negative_pivot_eigenvalue_gives_same_band() {
        let (_, o, s) = setup("heisenberg", &[qi(-2), qi(-2), qi(1)]);
        let t = make_shannon_tiling(&s, &o).unwrap();
        assert_eq!(t.scale, qi(2));
        assert_eq!(t.tile_index(&[qi(-3), qi(0), qi(0)]), Ok(1));
    }

    #[test]
    fn verification_is_deterministic_and_vacuous_at_zero() {
        let (_, o, s) = setup("heisenberg", &[qi(2), qi(2), qi(1)]);
        let t = make_shannon_tiling(&s, &o).unwrap();
        assert_eq!(t.verify(0, 1).summary(), "0 failures / 0");
        assert_eq!(t.verify(3000, 9), t.verify(3000, 9));
    }
}
