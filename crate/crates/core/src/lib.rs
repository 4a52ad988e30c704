//! Exact orbit-method toolkit for rational nilpotent Lie groups.
//!
//! Given a nilpotent Lie algebra in a strong Malcev basis with rational
//! structure constants, a diagonal dilation, and optionally a linear
//! functional, the crate computes the generic coadjoint-orbit data (jump
//! indices, cross-section, Vergne polarization, Pfaffian), classifies the
//! direct-integral decomposition of the associated wavelet representation,
//! builds and checks dilation tilings of the cross-section, and numerically
//! verifies the induced-representation identities.
//!
//! All algebraic computations are exact over `Q` or `Q[λ]`; floating point
//! appears only in phase factors and test-function evaluation inside
//! [`induced_rep`].

pub mod algebra;
pub mod catalog;
pub mod coadjoint;
pub mod decomposition;
pub mod dilation;
pub mod induced_rep;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod spec_format;
pub mod tiling;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

pub use algebra::{LieAlgebra, StructureConstants, ValidationReport, VectorQ};
pub use coadjoint::{Functional, OrbitData};
pub use decomposition::{DecompositionCase, DecompositionReport};
pub use dilation::{DensityProfile, DilationSpec};
pub use poly::Poly;
pub use tiling::TilingSpec;

/// Exact rational scalar used throughout.
pub type Q = num_rational::BigRational;

/// `n/d` as an exact rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parse `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den == BigInt::from(0) {
        return None;
    }
    Some(Q::new(num, den))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Render a 0-based index set as the usual 1-based set notation.
pub fn format_index_set(idx: &[usize]) -> String {
    let items: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", items.join(","))
}
