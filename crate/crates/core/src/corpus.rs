//! Bundled fixtures, addressed as `corpus:NAME`.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Lattice,
    Resolution,
    Config,
    Scenario,
}

pub const FILES: &[(&str, Kind, &str)] = &[
    ("a1", Kind::Resolution, include_str!("../corpus/a1.json")),
    ("a2", Kind::Resolution, include_str!("../corpus/a2.json")),
    (
        "blowup",
        Kind::Resolution,
        include_str!("../corpus/blowup.json"),
    ),
    ("d4", Kind::Resolution, include_str!("../corpus/d4.json")),
    (
        "elliptic",
        Kind::Resolution,
        include_str!("../corpus/elliptic.json"),
    ),
    (
        "elliptic_cone",
        Kind::Resolution,
        include_str!("../corpus/elliptic_cone.json"),
    ),
    (
        "elliptic_pullback",
        Kind::Scenario,
        include_str!("../corpus/elliptic_pullback.json"),
    ),
    ("l1", Kind::Lattice, include_str!("../corpus/l1.json")),
    ("l2", Kind::Lattice, include_str!("../corpus/l2.json")),
    (
        "l2_reider",
        Kind::Scenario,
        include_str!("../corpus/l2_reider.json"),
    ),
    ("l3", Kind::Lattice, include_str!("../corpus/l3.json")),
    (
        "l3_connectivity",
        Kind::Scenario,
        include_str!("../corpus/l3_connectivity.json"),
    ),
    (
        "minus3",
        Kind::Resolution,
        include_str!("../corpus/minus3.json"),
    ),
    ("mu", Kind::Scenario, include_str!("../corpus/mu.json")),
    (
        "nodal_cubic",
        Kind::Config,
        include_str!("../corpus/nodal_cubic.json"),
    ),
    (
        "smooth_curve",
        Kind::Config,
        include_str!("../corpus/smooth_curve.json"),
    ),
    (
        "triangle",
        Kind::Config,
        include_str!("../corpus/triangle.json"),
    ),
];

pub fn get(name: &str) -> Option<&'static str> {
    FILES
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, t)| *t)
}

pub fn names(kind: Kind) -> impl Iterator<Item = &'static str> {
    FILES
        .iter()
        .filter(move |(_, k, _)| *k == kind)
        .map(|(n, _, _)| *n)
}
