mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{fixture, BUNDLED};
use proptest::prelude::*;

use stratakit_core::isotropy::{isotropy_lattice, StratumInfo};
use stratakit_core::reduced::{
    coisotropic_lattice, connectable_pairs, piece_dimensions, projection_image, refinement_check,
    secondary_lattice, symplectic_lattice, Classification, ConnectablePair, PieceKind,
};
use stratakit_core::{Error, IsotropyLattice, StratLattice};

fn example() -> IsotropyLattice {
    isotropy_lattice(&fixture("example"), 42).unwrap()
}

fn edge_set(l: &StratLattice) -> BTreeSet<(String, String)> {
    l.edge_labels().into_iter().collect()
}

fn node_set(l: &StratLattice) -> BTreeSet<String> {
    l.nodes.iter().map(|n| n.label.clone()).collect()
}

fn set(list: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    list.iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

fn names(list: &[&str]) -> BTreeSet<String> {
    list.iter().map(|s| s.to_string()).collect()
}

#[test]
fn example_connectable_pairs() {
    let l = example();
    let pairs: BTreeSet<(String, String)> = connectable_pairs(&l)
        .into_iter()
        .map(|p| (l.class(p.upper).id.clone(), l.class(p.lower).id.clone()))
        .collect();
    let want = set(&[
        ("1", "1"),
        ("S1", "S1"),
        ("Z2", "Z2"),
        ("Z2xS1", "Z2xS1"),
        ("Z2", "1"),
        ("S1", "1"),
        ("Z2xS1", "1"),
        ("Z2xS1", "Z2"),
        ("Z2xS1", "S1"),
    ]);
    assert_eq!(pairs, want);
}

#[test]
fn small_pair_counts() {
    for (name, count) in [
        ("trivial", 1),
        ("z2_line", 3),
        ("s1_plane", 3),
        ("z2z2_plane", 9),
        ("s3_perm", 6),
    ] {
        let l = isotropy_lattice(&fixture(name), 42).unwrap();
        assert_eq!(connectable_pairs(&l).len(), count, "{name}");
    }
}

#[test]
fn example_piece_table() {
    let l = example();
    let got: BTreeMap<String, (i64, i64, i64, Classification)> = connectable_pairs(&l)
        .into_iter()
        .map(|p| {
            let piece = piece_dimensions(p, &l).unwrap();
            (
                piece.label(),
                (piece.dim_w, piece.dim_v, piece.rank, piece.classification),
            )
        })
        .collect();
    use Classification::*;
    let want: BTreeMap<String, (i64, i64, i64, Classification)> = [
        ("C_1", (4, 4, 4, Symplectic)),
        ("C_Z2", (2, 2, 2, Symplectic)),
        ("C_S1", (2, 2, 2, Symplectic)),
        ("C_Z2xS1", (0, 0, 0, Symplectic)),
        ("S_Z2->1", (3, 4, 2, CoisotropicProper)),
        ("S_S1->1", (3, 4, 2, CoisotropicProper)),
        ("S_Z2xS1->1", (2, 4, 0, Lagrangian)),
        ("S_Z2xS1->Z2", (1, 2, 0, Lagrangian)),
        ("S_Z2xS1->S1", (1, 2, 0, Lagrangian)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    assert_eq!(got, want);
}

/// Region products of the Hilbert-map image: `V`, `E`, `I` have dimension
/// 0, 1, 2 in each cone, so the pieces' dimensions add up.
#[test]
fn piece_dimensions_match_region_products() {
    let spec = fixture("example");
    let l = example();
    let dim = |r: &str| match r {
        "V" => 0,
        "E" => 1,
        "I" => 2,
        _ => panic!("{r}"),
    };
    let regions = &spec.fixtures().piece_regions;
    assert_eq!(regions.len(), 9);
    for p in connectable_pairs(&l) {
        let key = format!("{}->{}", l.class(p.upper).id, l.class(p.lower).id);
        let product: i64 = regions[&key].iter().map(|r| dim(r)).sum();
        assert_eq!(piece_dimensions(p, &l).unwrap().dim_w, product, "{key}");
    }
}

#[test]
fn lagrangian_criteria_agree() {
    let l = example();
    let mut by_corollary = BTreeSet::new();
    let mut by_half_dimension = BTreeSet::new();
    let mut by_class = BTreeSet::new();
    for p in connectable_pairs(&l) {
        let piece = piece_dimensions(p, &l).unwrap();
        if piece.kind == PieceKind::Seam && l.strata[p.upper].dim_quotient == 0 {
            by_corollary.insert(piece.label());
        }
        if piece.kind == PieceKind::Seam && 2 * piece.dim_w == piece.dim_v {
            by_half_dimension.insert(piece.label());
        }
        if piece.classification == Classification::Lagrangian {
            by_class.insert(piece.label());
        }
    }
    let want = names(&["S_Z2xS1->1", "S_Z2xS1->Z2", "S_Z2xS1->S1"]);
    assert_eq!(by_corollary, want);
    assert_eq!(by_half_dimension, want);
    assert_eq!(by_class, want);
}

#[test]
fn coisotropy_identity_on_bundled_specs() {
    for name in BUNDLED {
        let l = isotropy_lattice(&fixture(name), 42).unwrap();
        for p in connectable_pairs(&l) {
            let piece = piece_dimensions(p, &l).unwrap();
            assert_eq!(
                piece.rank,
                2 * piece.dim_w - piece.dim_v,
                "{name} {}",
                piece.label()
            );
            assert!(piece.dim_v >= 0 && piece.dim_w <= piece.dim_v && piece.rank >= 0);
        }
    }
}

#[test]
fn identity_violation_is_reported() {
    let mut l = example();
    let top = l.index_of("Z2xS1").unwrap();
    l.strata[top] = StratumInfo {
        dim_stratum: 1,
        ..l.strata[top].clone()
    };
    let err = piece_dimensions(
        ConnectablePair {
            upper: top,
            lower: 0,
        },
        &l,
    )
    .unwrap_err();
    assert!(
        matches!(err, Error::CoisotropyIdentityViolation { .. }),
        "{err:?}"
    );
}

#[test]
fn example_symplectic_lattice() {
    let s = symplectic_lattice(&example()).unwrap();
    assert_eq!(node_set(&s), names(&["P_1", "P_S1", "P_Z2", "P_Z2xS1"]));
    assert_eq!(
        edge_set(&s),
        set(&[
            ("P_Z2xS1", "P_Z2"),
            ("P_Z2xS1", "P_S1"),
            ("P_Z2", "P_1"),
            ("P_S1", "P_1")
        ])
    );
    let dims: Vec<i64> = s.nodes.iter().map(|n| n.dim).collect();
    assert_eq!(dims, [4, 2, 2, 0]);
    assert_eq!(s.open_dense.map(|i| s.nodes[i].label.as_str()), Some("P_1"));
}

#[test]
fn example_secondary_lattices() {
    let l = example();
    let cases: [(&str, &[&str], &[(&str, &str)]); 4] = [
        (
            "1",
            &["C_1", "S_Z2->1", "S_S1->1", "S_Z2xS1->1"],
            &[
                ("S_Z2xS1->1", "S_Z2->1"),
                ("S_Z2xS1->1", "S_S1->1"),
                ("S_Z2->1", "C_1"),
                ("S_S1->1", "C_1"),
            ],
        ),
        ("Z2", &["C_Z2", "S_Z2xS1->Z2"], &[("S_Z2xS1->Z2", "C_Z2")]),
        ("S1", &["C_S1", "S_Z2xS1->S1"], &[("S_Z2xS1->S1", "C_S1")]),
        ("Z2xS1", &["C_Z2xS1"], &[]),
    ];
    for (id, nodes, edges) in cases {
        let sec = secondary_lattice(id, &l).unwrap();
        assert_eq!(sec.nodes[0].label, format!("C_{id}"));
        assert_eq!(node_set(&sec), names(nodes), "{id}");
        assert_eq!(edge_set(&sec), set(edges), "{id}");
        assert_eq!(sec.open_dense, Some(0));
    }
    assert_eq!(
        secondary_lattice("D7", &l).unwrap_err(),
        Error::ClassNotFound("D7".into())
    );
}

#[test]
fn example_coisotropic_lattice() {
    let c = coisotropic_lattice(&example()).unwrap();
    assert_eq!(c.nodes.len(), 9);
    let want = set(&[
        ("C_Z2xS1", "S_Z2xS1->Z2"),
        ("C_Z2xS1", "S_Z2xS1->S1"),
        ("S_Z2xS1->Z2", "C_Z2"),
        ("S_Z2xS1->Z2", "S_Z2xS1->1"),
        ("S_Z2xS1->S1", "C_S1"),
        ("S_Z2xS1->S1", "S_Z2xS1->1"),
        ("C_Z2", "S_Z2->1"),
        ("C_S1", "S_S1->1"),
        ("S_Z2xS1->1", "S_Z2->1"),
        ("S_Z2xS1->1", "S_S1->1"),
        ("S_Z2->1", "C_1"),
        ("S_S1->1", "C_1"),
    ]);
    assert_eq!(edge_set(&c), want);
    assert_eq!(c.open_dense.map(|i| c.nodes[i].label.as_str()), Some("C_1"));
}

#[test]
fn z2_line_lattices() {
    let l = isotropy_lattice(&fixture("z2_line"), 42).unwrap();
    let c = coisotropic_lattice(&l).unwrap();
    assert_eq!(
        edge_set(&c),
        set(&[("C_Z2", "S_Z2->1"), ("S_Z2->1", "C_1")])
    );
    let s = symplectic_lattice(&l).unwrap();
    assert_eq!((s.nodes.len(), s.edges.len()), (2, 1));
    let r = refinement_check(&c, &s);
    assert!(r.refines && r.strict);
}

#[test]
fn single_class_lattices_coincide() {
    let l = isotropy_lattice(&fixture("trivial"), 42).unwrap();
    let c = coisotropic_lattice(&l).unwrap();
    let s = symplectic_lattice(&l).unwrap();
    let sec = secondary_lattice("1", &l).unwrap();
    for lat in [&c, &s, &sec] {
        assert_eq!((lat.nodes.len(), lat.edges.len()), (1, 0));
    }
    assert_eq!(c.nodes[0].dim, s.nodes[0].dim);
    let r = refinement_check(&c, &s);
    assert!(r.refines && !r.strict);
}

#[test]
fn example_refinement_is_strict() {
    let l = example();
    let r = refinement_check(
        &coisotropic_lattice(&l).unwrap(),
        &symplectic_lattice(&l).unwrap(),
    );
    assert!(r.refines && r.strict);
}

#[test]
fn projection_images() {
    let l = example();
    for p in connectable_pairs(&l) {
        let piece = piece_dimensions(p, &l).unwrap();
        assert_eq!(projection_image(&piece), l.class(p.upper));
    }
    let g = l.index_of("Z2xS1").unwrap();
    let piece = piece_dimensions(ConnectablePair { upper: g, lower: 0 }, &l).unwrap();
    assert_eq!(projection_image(&piece).id, "Z2xS1");
}

fn transitive_reduction_ok(lat: &StratLattice) -> bool {
    let n = lat.nodes.len();
    lat.frontier.is_acyclic()
        && lat.edges.iter().all(|&(a, b)| {
            lat.frontier.less(a, b)
                && !(0..n).any(|c| lat.frontier.less(a, c) && lat.frontier.less(c, b))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lattices_are_reduced_and_acyclic(i in 0..BUNDLED.len()) {
        let l = isotropy_lattice(&fixture(BUNDLED[i]), 42).unwrap();
        let c = coisotropic_lattice(&l).unwrap();
        let s = symplectic_lattice(&l).unwrap();
        prop_assert!(transitive_reduction_ok(&c));
        prop_assert!(transitive_reduction_ok(&s));
        for class in l.classes() {
            prop_assert!(transitive_reduction_ok(&secondary_lattice(&class.id, &l).unwrap()));
        }
        let r = refinement_check(&c, &s);
        prop_assert!(r.refines);
        prop_assert_eq!(r.strict, l.len() > 1);
    }

    /// Frontier edges never increase the piece dimension, and projections
    /// respect the frontier: `img(R) ≥ img(S)` for `R ⊆ ∂S`.
    #[test]
    fn frontier_is_compatible(i in 0..BUNDLED.len()) {
        let l = isotropy_lattice(&fixture(BUNDLED[i]), 42).unwrap();
        let c = coisotropic_lattice(&l).unwrap();
        for &(r, s) in &c.edges {
            let (pr, ps) = (&c.nodes[r].piece, &c.nodes[s].piece);
            prop_assert!(c.nodes[r].dim < c.nodes[s].dim);
            prop_assert!(l.order.leq(ps.pair.upper, pr.pair.upper));
        }
    }
}
