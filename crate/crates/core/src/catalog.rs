//! Built-in example algebras, shipped as spec files.

use crate::spec_format::{parse_spec, SpecDocument};

pub const HEISENBERG: &str = include_str!("../specs/heisenberg.spec");
pub const HEISENBERG_TRIVIAL: &str = include_str!("../specs/heisenberg_trivial.spec");
pub const HEISENBERG_EXPANSIVE: &str = include_str!("../specs/heisenberg_expansive.spec");
pub const UPPER4: &str = include_str!("../specs/upper4.spec");
pub const GL10: &str = include_str!("../specs/gl10.spec");
pub const FIVE_DIM: &str = include_str!("../specs/five_dim.spec");
pub const FREE2STEP: &str = include_str!("../specs/free2step.spec");
pub const ABELIAN3: &str = include_str!("../specs/abelian3.spec");

pub const ALL: &[(&str, &str)] = &[
    ("heisenberg", HEISENBERG),
    ("heisenberg_trivial", HEISENBERG_TRIVIAL),
    ("heisenberg_expansive", HEISENBERG_EXPANSIVE),
    ("upper4", UPPER4),
    ("gl10", GL10),
    ("five_dim", FIVE_DIM),
    ("free2step", FREE2STEP),
    ("abelian3", ABELIAN3),
];

pub fn text(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parsed example; the shipped files are known to parse.
pub fn document(name: &str) -> Option<SpecDocument> {
    text(name).map(|t| parse_spec(t).expect("shipped spec parses"))
}
