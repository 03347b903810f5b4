mod common;

use common::{fixture, fixture_text, ints, rat};
use num_rational::BigRational;
use proptest::prelude::*;

use stratakit_core::harness::{
    check_relations, classify_image, eval_invariants, frontier_cross_check, sample_zero_level,
    verify_piece_regions, ConeLabel, ConeRegion, InvariantSet, FRONTIER_DISTANCE,
};
use stratakit_core::isotropy::isotropy_lattice;
use stratakit_core::momentum::{fiber_zero_basis, momentum, COVECTOR_DENOMINATOR};
use stratakit_core::reduced::coisotropic_lattice;
use stratakit_core::sampling::{ball_in_span, stream};
use stratakit_core::Error;

fn z(m: &[i64], p: &[i64]) -> Vec<BigRational> {
    ints(m).into_iter().chain(ints(p)).collect()
}

fn regions(list: &[(ConeLabel, usize)]) -> Vec<ConeRegion> {
    list.iter()
        .map(|&(label, cone)| ConeRegion { cone, label })
        .collect()
}

#[test]
fn invariant_values() {
    let inv = InvariantSet::from_spec(&fixture("example"));
    let vals = eval_invariants(&inv, &z(&[1, 0, 2], &[0, 1, 3])).unwrap();
    let names: Vec<&str> = vals.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        ["sigma1", "sigma2", "sigma3", "rho1", "rho2", "rho3", "j"]
    );
    let v: Vec<BigRational> = vals.into_iter().map(|(_, x)| x).collect();
    assert_eq!(v, ints(&[2, 0, 0, 13, 12, 5, 1]));
    assert!(matches!(
        eval_invariants(&inv, &ints(&[1, 2])),
        Err(Error::DimensionMismatch {
            expected: 6,
            got: 2
        })
    ));
}

/// `σ₁² − σ₂² − σ₃² = 4j²` and `ρ₁² = ρ₂² + ρ₃²` hold identically, with the
/// closed forms written out by hand.
#[test]
fn cone_identities_hold_exactly() {
    let inv = InvariantSet::from_spec(&fixture("example"));
    let mut rng = stream(5, 0);
    for _ in 0..200 {
        let pt: Vec<BigRational> = (0..6)
            .map(|_| stratakit_core::sampling::small_rational(&mut rng))
            .collect();
        let (x, y) = (&pt[..3], &pt[3..]);
        let v: Vec<BigRational> = eval_invariants(&inv, &pt)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v)
            .collect();
        let two = rat(2, 1);
        let s1 = &x[0] * &x[0] + &x[1] * &x[1] + &y[0] * &y[0] + &y[1] * &y[1];
        let s2 = &two * (&x[0] * &y[0] + &x[1] * &y[1]);
        let s3 = &y[0] * &y[0] + &y[1] * &y[1] - &x[0] * &x[0] - &x[1] * &x[1];
        let j = &x[0] * &y[1] - &x[1] * &y[0];
        assert_eq!(v[0], s1);
        assert_eq!(v[1], s2);
        assert_eq!(v[2], s3);
        assert_eq!(v[6], j);
        assert_eq!(&s1 * &s1 - &s2 * &s2 - &s3 * &s3, rat(4, 1) * &j * &j);
        assert_eq!(&v[3] * &v[3], &v[4] * &v[4] + &v[5] * &v[5]);
    }
}

#[test]
fn relations_hold_on_zero_level() {
    let spec = fixture("example");
    let inv = InvariantSet::from_spec(&spec);
    let samples = sample_zero_level(&spec, 5_000, 42).unwrap();
    for (m, p) in &samples {
        assert!(m.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12);
        assert!(momentum(&spec, m, p).unwrap()[0].abs() < 1e-12);
    }
    let pts: Vec<Vec<f64>> = samples.into_iter().map(|(m, p)| [m, p].concat()).collect();
    let report = check_relations(&inv, &pts, 1e-9);
    assert!(report.pass, "{report:?}");
    assert_eq!(report.relations.len(), 4);
    assert!(report.relations.iter().all(|r| r.samples == 5_000));
}

#[test]
fn relations_flag_points_off_the_zero_level() {
    // σ₁² = σ₂² + σ₃² holds on the zero level only
    let mut doc: serde_json::Value = serde_json::from_str(&fixture_text("example")).unwrap();
    doc["relations"][0]["terms"].as_array_mut().unwrap().pop();
    let inv = InvariantSet::from_spec(&stratakit_core::ActionSpec::load(&doc.to_string()).unwrap());
    let report = check_relations(&inv, &[vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]], 1e-9);
    assert!(!report.pass);
    let sigma = &report.relations[0];
    assert_eq!(sigma.name, "sigma-cone");
    assert!((sigma.max - 4.0).abs() < 1e-12);
    assert!(report.relations[1].pass);
}

#[test]
fn sampling_rejects_zero_budget() {
    assert_eq!(
        sample_zero_level(&fixture("example"), 0, 1).unwrap_err(),
        Error::InvalidBudget
    );
}

#[test]
fn classify_examples() {
    use ConeLabel::*;
    let spec = fixture("example");
    let cases: [(&[i64], &[i64], &[(ConeLabel, usize)]); 5] = [
        (&[0, 0, 0], &[0, 0, 0], &[(V, 1), (V, 2)]),
        (&[0, 0, 0], &[1, 0, 0], &[(E, 1), (V, 2)]),
        (&[1, 0, 0], &[0, 0, 0], &[(B, 1), (V, 2)]),
        (&[0, 0, 1], &[0, 0, 0], &[(V, 1), (B, 2)]),
        (&[1, 0, 1], &[2, 0, 1], &[(I, 1), (I, 2)]),
    ];
    for (m, p, want) in cases {
        assert_eq!(
            classify_image(&spec, &z(m, p)).unwrap(),
            regions(want),
            "{m:?} {p:?}"
        );
    }
    let s = classify_image(&spec, &z(&[1, 0, 1], &[2, 0, 1])).unwrap();
    assert_eq!(
        s.iter().map(ToString::to_string).collect::<Vec<_>>(),
        ["I1", "I2"]
    );
}

#[test]
fn classify_errors() {
    let spec = fixture("example");
    assert!(matches!(
        classify_image(&spec, &z(&[1, 0, 0], &[0, 1, 0])),
        Err(Error::NotOnZeroLevel(_))
    ));
    assert_eq!(
        classify_image(&fixture("z2_line"), &ints(&[1, 1])).unwrap_err(),
        Error::NotExampleSpec
    );
}

#[test]
fn boundary_ray_counts_as_interior() {
    assert!(ConeLabel::B.within("I"));
    assert!(ConeLabel::I.within("I"));
    assert!(!ConeLabel::E.within("I"));
    assert!(!ConeLabel::V.within("E"));
}

#[test]
fn example_piece_regions() {
    let spec = fixture("example");
    let l = isotropy_lattice(&spec, 42).unwrap();
    let report = verify_piece_regions(&spec, &l, 100, 42).unwrap();
    assert_eq!(report.pairs.len(), 9);
    for p in &report.pairs {
        assert_eq!(p.hits, 100, "{p:?}");
        assert_eq!(
            p.local_dims.keys().copied().collect::<Vec<_>>(),
            [p.dim_w as usize],
            "{p:?}"
        );
    }
    assert!(report.pass);
    let s = report.pairs.iter().find(|p| p.pair == "Z2->1").unwrap();
    assert_eq!(s.expected, ["I", "E"]);
}

#[test]
fn region_check_needs_cone_fixture() {
    let spec = fixture("z2_line");
    let l = isotropy_lattice(&spec, 42).unwrap();
    assert_eq!(
        verify_piece_regions(&spec, &l, 10, 42).unwrap_err(),
        Error::NotExampleSpec
    );
}

#[test]
fn example_frontier() {
    let spec = fixture("example");
    let l = isotropy_lattice(&spec, 42).unwrap();
    let c = coisotropic_lattice(&l).unwrap();
    let report = frontier_cross_check(&spec, &l, &c, 20, 42).unwrap();
    assert_eq!(report.edges.len(), 12);
    assert_eq!(report.bound, FRONTIER_DISTANCE);
    for e in &report.edges {
        assert!(
            e.pass && e.constructed == e.samples && e.max_distance <= FRONTIER_DISTANCE,
            "{e:?}"
        );
    }
    assert!(report.pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn regions_are_group_invariant(m in prop::collection::vec(-3i64..=3, 3), seed in any::<u64>()) {
        let spec = fixture("example");
        let mut rng = stream(seed, 0);
        let m = ints(&m);
        let basis = fiber_zero_basis(&spec, &m).unwrap();
        let p: Vec<BigRational> = ball_in_span(&basis, 3, COVECTOR_DENOMINATOR, &mut rng);
        let g = spec.random_exact_element(&mut rng);
        let (gm, gp) = spec.cotangent_act(&g, &m, &p).unwrap();
        let a = classify_image(&spec, &[m.clone(), p.clone()].concat()).unwrap();
        let b = classify_image(&spec, &[gm, gp].concat()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn invariants_are_exactly_invariant(v in prop::collection::vec((-20i64..=20, 1i64..=9), 6), seed in any::<u64>()) {
        let spec = fixture("example");
        let inv = InvariantSet::from_spec(&spec);
        let pt: Vec<BigRational> = v.into_iter().map(|(p, q)| rat(p, q)).collect();
        let g = spec.random_exact_element(&mut stream(seed, 1));
        let (gm, gp) = spec.cotangent_act(&g, &pt[..3], &pt[3..]).unwrap();
        prop_assert_eq!(eval_invariants(&inv, &pt).unwrap(), eval_invariants(&inv, &[gm, gp].concat()).unwrap());
    }

    /// Two orbits with different cone regions have different orbit types.
    #[test]
    fn regions_separate_orbit_types(seed in any::<u64>()) {
        let spec = fixture("example");
        let mut rng = stream(seed, 2);
        let witnesses: [&[i64]; 4] = [&[0, 0, 0], &[1, 0, 0], &[0, 0, 1], &[1, 0, 1]];
        let mut seen = std::collections::BTreeMap::new();
        for m in witnesses {
            let m = ints(m);
            let p = vec![rat(0, 1); 3];
            let key = classify_image(&spec, &[m.clone(), p.clone()].concat()).unwrap();
            let class = spec.class_of(&spec.cotangent_stabilizer(&m, &p).unwrap()).id;
            let g = spec.random_exact_element(&mut rng);
            let (gm, gp) = spec.cotangent_act(&g, &m, &p).unwrap();
            prop_assert_eq!(&classify_image(&spec, &[gm, gp].concat()).unwrap(), &key);
            let fresh = seen.insert(format!("{:?}", key), class).is_none();
            prop_assert!(fresh);
        }
    }
}
