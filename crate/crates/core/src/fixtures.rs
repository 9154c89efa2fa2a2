//! Small named carriers used throughout the docs, tests and CLI.

use crate::category::{CategorySpec, FiniteCategory};
use crate::functors::FunctorSpec;
use crate::order::{divisor_lattice, FiniteLattice};

/// The chain `0 < 1 < 2`.
pub fn chain3() -> FiniteLattice {
    FiniteLattice::build(&["0", "1", "2"], &[("0", "1"), ("1", "2")]).expect("chain")
}

/// Divisors of 12 under divisibility.
pub fn d12() -> FiniteLattice {
    divisor_lattice(12)
}

/// The four-element Boolean lattice `bot < a, b < top`.
pub fn sq() -> FiniteLattice {
    FiniteLattice::build(
        &["bot", "a", "b", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )
    .expect("square")
}

/// The diamond with three atoms; a lattice but not distributive.
pub fn m3() -> FiniteLattice {
    FiniteLattice::build(
        &["bot", "p", "q", "r", "top"],
        &[
            ("bot", "p"),
            ("bot", "q"),
            ("bot", "r"),
            ("p", "top"),
            ("q", "top"),
            ("r", "top"),
        ],
    )
    .expect("diamond")
}

/// Two points `x, y : 1 -> C` of an object `C` with the retraction
/// `t : C -> 1`, and the idempotents `a = x∘t`, `b = y∘t`.
pub fn twopt_spec() -> CategorySpec {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let m = |n: &str, d: &str, c: &str| (n.to_string(), d.to_string(), c.to_string());
    let comps = [
        ("t", "x", "id_1"),
        ("t", "y", "id_1"),
        ("t", "a", "t"),
        ("t", "b", "t"),
        ("x", "t", "a"),
        ("y", "t", "b"),
        ("a", "x", "x"),
        ("a", "y", "x"),
        ("b", "x", "y"),
        ("b", "y", "y"),
        ("a", "a", "a"),
        ("a", "b", "a"),
        ("b", "a", "b"),
        ("b", "b", "b"),
    ];
    CategorySpec {
        objects: s(&["1", "C"]),
        morphisms: vec![
            m("id_1", "1", "1"),
            m("id_C", "C", "C"),
            m("x", "1", "C"),
            m("y", "1", "C"),
            m("t", "C", "1"),
            m("a", "C", "C"),
            m("b", "C", "C"),
        ],
        identities: vec![
            ("1".into(), "id_1".into()),
            ("C".into(), "id_C".into()),
        ],
        compositions: comps
            .iter()
            .map(|&(f, g, h)| (f.to_string(), g.to_string(), h.to_string()))
            .collect(),
    }
}

pub fn twopt() -> FiniteCategory {
    FiniteCategory::build(&twopt_spec()).expect("two-point category")
}

/// The symmetry of the two-point category exchanging `x, y` and `a, b`.
pub fn twopt_swap() -> FunctorSpec {
    let pairs = |v: &[(&str, &str)]| {
        v.iter()
            .map(|&(a, b)| (a.to_string(), b.to_string()))
            .collect::<Vec<_>>()
    };
    FunctorSpec {
        objects: pairs(&[("1", "1"), ("C", "C")]),
        morphisms: pairs(&[("x", "y"), ("y", "x"), ("a", "b"), ("b", "a"), ("t", "t")]),
    }
}

/// Monotone self-map of the chain sending `1` to `0`.
pub fn chain3_collapse() -> Vec<(String, String)> {
    [("0", "0"), ("1", "0"), ("2", "2")]
        .iter()
        .map(|&(a, b)| (a.to_string(), b.to_string()))
        .collect()
}
