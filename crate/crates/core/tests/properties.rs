use std::sync::OnceLock;

use num_traits::{One, Zero};
use orbitkit::algebra::{validate_algebra, VectorQ};
use orbitkit::coadjoint::{self, skew_form, Functional, OrbitData};
use orbitkit::dilation::{validate_dilation, DilationSpec};
use orbitkit::induced_rep::{verify_homomorphism, RepModel};
use orbitkit::tiling::make_shannon_tiling;
use orbitkit::{catalog, linalg, q, LieAlgebra, Poly, Q};
use proptest::prelude::*;

const GROUPS: &[&str] = &["heisenberg", "upper4", "gl10", "five_dim", "free2step", "abelian3"];
const MAX_DIM: usize = 9;

struct Group {
    alg: LieAlgebra,
    orbit: OrbitData,
}

fn groups() -> &'static [Group] {
    static CELL: OnceLock<Vec<Group>> = OnceLock::new();
    CELL.get_or_init(|| {
        GROUPS
            .iter()
            .map(|name| {
                let alg = catalog::document(name).unwrap().algebra().unwrap();
                let orbit = OrbitData::compute(&alg).unwrap();
                Group { alg, orbit }
            })
            .collect()
    })
}

fn rational() -> impl Strategy<Value = Q> {
    (-24i64..=24, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    (1i64..=12, 1i64..=6, any::<bool>()).prop_map(|(n, d, s)| q(if s { n } else { -n }, d))
}

fn vectors(count: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(prop::collection::vec(rational(), MAX_DIM), count)
}

fn cut(v: &[Q], n: usize) -> VectorQ {
    VectorQ(v[..n].to_vec())
}

/// Diagonal automorphism built from free values on the generators, with
/// `a_k = a_i a_j` propagated down the brackets. Falls back to the graded
/// dilation with every generator scaled by `s` when the free choice is
/// inconsistent.
fn automorphism(alg: &LieAlgebra, free: &[Q]) -> DilationSpec {
    let n = alg.dim();
    let derived = alg.derived_dim();
    let build = |gen: &dyn Fn(usize) -> Q| {
        let mut a: Vec<Q> = (0..n).map(|k| if k >= derived { gen(k) } else { Q::one() }).collect();
        for k in (0..derived).rev() {
            if let Some((i, j, _, _)) = alg.structure().entries().find(|e| e.2 == k) {
                a[k] = &a[i] * &a[j];
            }
        }
        a
    };
    let e = OrbitData::compute(alg).unwrap().e;
    let a = build(&|k| free[k].clone());
    let spec = validate_dilation(alg, &a, &e).unwrap();
    if spec.is_automorphism {
        return spec;
    }
    let a = build(&|_| free[0].clone());
    let spec = validate_dilation(alg, &a, &e).unwrap();
    assert!(spec.is_automorphism, "graded dilation {a:?}");
    spec
}

#[test]
fn jacobi_on_all_basis_triples() {
    for g in groups() {
        let sc = g.alg.structure();
        let n = g.alg.dim();
        let basis: Vec<VectorQ> = (0..n).map(|i| VectorQ::basis(n, i)).collect();
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let s = sc
                        .bracket(x, &sc.bracket(y, z))
                        .add(&sc.bracket(y, &sc.bracket(z, x)))
                        .add(&sc.bracket(z, &sc.bracket(x, y)));
                    assert!(s.is_zero());
                }
            }
        }
        assert!(validate_algebra(sc).is_valid());
    }
}

#[test]
fn pfaffian_squares_to_determinant_symbolically() {
    for g in groups() {
        let b = skew_form(&g.alg, &Functional::generic(g.alg.dim())).unwrap();
        let sub = b.submatrix(&g.orbit.e);
        assert_eq!(g.orbit.pfaffian.mul(&g.orbit.pfaffian), linalg::det(&sub));
        assert_eq!(g.orbit.e.len(), 2 * g.orbit.d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jacobi_on_random_triples(v in vectors(3)) {
        for g in groups() {
            let n = g.alg.dim();
            let (x, y, z) = (cut(&v[0], n), cut(&v[1], n), cut(&v[2], n));
            let sc = g.alg.structure();
            let s = sc.bracket(&x, &sc.bracket(&y, &z))
                .add(&sc.bracket(&y, &sc.bracket(&z, &x)))
                .add(&sc.bracket(&z, &sc.bracket(&x, &y)));
            prop_assert!(s.is_zero());
        }
    }

    #[test]
    fn bch_group_axioms(v in vectors(3)) {
        for g in groups() {
            let n = g.alg.dim();
            let (x, y, z) = (cut(&v[0], n), cut(&v[1], n), cut(&v[2], n));
            let a = &g.alg;
            prop_assert_eq!(a.bch(&a.bch(&x, &y), &z), a.bch(&x, &a.bch(&y, &z)));
            prop_assert_eq!(a.bch(&x, &VectorQ::zeros(n)), x.clone());
            prop_assert_eq!(a.bch(&VectorQ::zeros(n), &x), x.clone());
            prop_assert!(a.bch(&x, &x.neg()).is_zero());
            prop_assert_eq!(a.bch(&x, &x), x.scale(&q(2, 1)));
        }
    }

    #[test]
    fn coordinate_round_trip(v in vectors(1)) {
        for g in groups() {
            let x = cut(&v[0], g.alg.dim());
            let t = g.alg.second_from_first(&x).unwrap();
            prop_assert_eq!(g.alg.first_from_second(&t).unwrap(), x.clone());
            let x2 = g.alg.first_from_second(&x).unwrap();
            prop_assert_eq!(g.alg.second_from_first(&x2).unwrap(), x);
        }
    }

    #[test]
    fn pfaffian_squares_to_determinant_pointwise(v in vectors(1)) {
        for g in groups() {
            let lam = &v[0][..g.alg.dim()];
            let b = skew_form(&g.alg, &Functional::rational(lam.to_vec())).unwrap();
            let sub: Vec<Vec<Q>> = g.orbit.e.iter()
                .map(|&i| g.orbit.e.iter().map(|&j| b.matrix[i][j].constant_term()).collect())
                .collect();
            let p = g.orbit.pfaffian.eval(lam);
            prop_assert_eq!(&p * &p, linalg::det(&sub));
        }
    }

    #[test]
    fn pfaffian_scales_under_dilation(
        v in vectors(1),
        free in prop::collection::vec(nonzero_rational(), MAX_DIM),
    ) {
        for g in groups() {
            let n = g.alg.dim();
            let spec = automorphism(&g.alg, &free[..n]);
            let lam = &v[0][..n];
            let moved: Vec<Q> = lam.iter().zip(&spec.a).map(|(l, a)| l * a).collect();
            let factor: Q = g.orbit.e.iter().map(|&k| spec.a[k].clone()).product();
            prop_assert_eq!(g.orbit.pfaffian.eval(&moved), factor * g.orbit.pfaffian.eval(lam));
        }
    }

    #[test]
    fn polarization_is_equivariant(
        v in vectors(1),
        free in prop::collection::vec(nonzero_rational(), MAX_DIM),
    ) {
        for g in groups() {
            let n = g.alg.dim();
            let lam = v[0][..n].to_vec();
            if !g.orbit.in_generic_layer(&g.alg, &lam) {
                continue;
            }
            let spec = automorphism(&g.alg, &free[..n]);
            let moved = spec.dual_action(&Functional::rational(lam.clone()), 1);
            let p = coadjoint::vergne_polarization(&g.alg, &g.orbit, &Functional::rational(lam)).unwrap();
            let p_moved = coadjoint::vergne_polarization(&g.alg, &g.orbit, &moved).unwrap();
            let inv: Vec<Q> = spec.a.iter().map(|a| a.recip()).collect();
            prop_assert!(p_moved.same_as(&p.map_diag(&inv)));
        }
    }

    #[test]
    fn polarization_properties(v in vectors(1)) {
        for g in groups() {
            let n = g.alg.dim();
            let lam = Functional::rational(v[0][..n].to_vec());
            if !g.orbit.in_generic_layer(&g.alg, &v[0][..n]) {
                continue;
            }
            let p = coadjoint::vergne_polarization(&g.alg, &g.orbit, &lam).unwrap();
            prop_assert_eq!(p.dim(), n - g.orbit.d);
            prop_assert!(coadjoint::is_subalgebra(&g.alg, &p));
            prop_assert!(coadjoint::is_isotropic(&g.alg, &lam, &p));
        }
    }

    #[test]
    fn character_is_multiplicative_on_polarization(v in vectors(1), c in vectors(2)) {
        for g in groups() {
            let n = g.alg.dim();
            let lam = v[0][..n].to_vec();
            if !g.orbit.in_generic_layer(&g.alg, &lam) {
                continue;
            }
            let p = coadjoint::vergne_polarization(&g.alg, &g.orbit, &Functional::rational(lam.clone())).unwrap();
            let basis = p.rational_basis().unwrap();
            let combo = |coeffs: &[Q]| basis.iter().zip(coeffs)
                .fold(VectorQ::zeros(n), |acc, (b, s)| acc.add(&b.scale(s)));
            let (p1, p2) = (combo(&c[0]), combo(&c[1]));
            let ev = |x: &VectorQ| -> Q { lam.iter().zip(&x.0).map(|(a, b)| a * b).sum() };
            prop_assert_eq!(ev(&g.alg.bch(&p1, &p2)), ev(&p1) + ev(&p2));
        }
    }

    #[test]
    fn tiles_are_disjoint_and_cover(
        v in vectors(1),
        free in prop::collection::vec(nonzero_rational(), MAX_DIM),
    ) {
        for g in groups() {
            let n = g.alg.dim();
            let spec = automorphism(&g.alg, &free[..n]);
            let Ok(t) = make_shannon_tiling(&spec, &g.orbit) else { continue };
            let lam: Vec<Q> = (0..n)
                .map(|k| if g.orbit.e.contains(&k) { Q::zero() } else { v[0][k].clone() })
                .collect();
            if lam[t.pivot].is_zero() {
                continue;
            }
            let m = t.tile_index(&lam).unwrap();
            let shifted = |m: i64| -> Vec<Q> {
                lam.iter().zip(spec.power(-m)).map(|(l, a)| l * a).collect()
            };
            prop_assert!(t.contains(&shifted(m)));
            for other in (m - 3..=m + 3).filter(|&o| o != m) {
                prop_assert!(!t.contains(&shifted(other)));
            }
        }
    }

    #[test]
    fn dilations_form_a_group_action(
        v in vectors(2),
        free in prop::collection::vec(nonzero_rational(), MAX_DIM),
        m1 in -3i64..=3,
        m2 in -3i64..=3,
    ) {
        for g in groups() {
            let n = g.alg.dim();
            let spec = automorphism(&g.alg, &free[..n]);
            let (x, y) = (cut(&v[0], n), cut(&v[1], n));
            prop_assert_eq!(spec.apply(&spec.apply(&x, m1), m2), spec.apply(&x, m1 + m2));
            prop_assert_eq!(spec.apply(&x, 0), x.clone());
            prop_assert_eq!(
                spec.apply(&g.alg.bch(&x, &y), m1),
                g.alg.bch(&spec.apply(&x, m1), &spec.apply(&y, m1))
            );
            let lam = Functional::rational(v[0][..n].to_vec());
            prop_assert_eq!(
                spec.dual_action(&spec.dual_action(&lam, m1), m2),
                spec.dual_action(&lam, m1 + m2)
            );
        }
    }

    #[test]
    fn automorphism_flag_matches_bracket_commutation(
        a in prop::collection::vec(
            prop::sample::select(vec![q(1, 2), q(1, 1), q(2, 1), q(-1, 1), q(4, 1), q(1, 4)]),
            MAX_DIM,
        ),
    ) {
        for g in groups() {
            let n = g.alg.dim();
            let spec = validate_dilation(&g.alg, &a[..n], &g.orbit.e).unwrap();
            let sc = g.alg.structure();
            let commutes = (0..n).all(|i| (0..n).all(|j| {
                let (x, y) = (VectorQ::basis(n, i), VectorQ::basis(n, j));
                sc.bracket(&x, &y).hadamard(&a[..n]) == sc.bracket(&x.hadamard(&a[..n]), &y.hadamard(&a[..n]))
            }));
            prop_assert_eq!(spec.is_automorphism, commutes);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn induced_representation_is_a_homomorphism(v in vectors(1), seed in any::<u64>()) {
        for g in groups() {
            let n = g.alg.dim();
            let lam: Vec<Q> = (0..n)
                .map(|k| if g.orbit.e.contains(&k) { Q::zero() } else { v[0][k].clone() })
                .collect();
            if !g.orbit.in_cross_section(&g.alg, &lam) {
                continue;
            }
            let model = RepModel::new(&g.alg, &g.orbit, &lam).unwrap();
            prop_assert!(verify_homomorphism(&model, 8, seed).unwrap() < 1e-9);
        }
    }
}

#[test]
fn generic_pfaffian_is_not_zero_polynomial() {
    for g in groups() {
        assert_ne!(g.orbit.pfaffian, Poly::zero());
    }
}
