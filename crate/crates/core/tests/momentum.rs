mod common;

use std::collections::BTreeSet;

use common::{fixture, ints, rat, BUNDLED};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use stratakit_core::isotropy::isotropy_lattice;
use stratakit_core::linalg::{dot, rank};
use stratakit_core::momentum::{
    conormal_orbit_types, fiber_decomposition, fiber_zero_basis, momentum, sample_conormal_classes,
    sample_fiber_classes, COVECTOR_DENOMINATOR,
};
use stratakit_core::sampling::{ball_in_span, stream};
use stratakit_core::{Error, IsotropyClass};

fn ids<'a>(c: impl IntoIterator<Item = &'a IsotropyClass>) -> Vec<String> {
    c.into_iter().map(|c| c.id.clone()).collect()
}

#[test]
fn momentum_is_angular_momentum() {
    let spec = fixture("example");
    let j = spec.invariant("j").unwrap();
    for (m, p) in [
        ([1, 2, 3], [4, 5, 6]),
        ([0, 1, 0], [1, 0, 0]),
        ([2, -1, 7], [2, -1, -3]),
    ] {
        let (m, p) = (ints(&m), ints(&p));
        let z: Vec<BigRational> = m.iter().chain(&p).cloned().collect();
        assert_eq!(momentum(&spec, &m, &p).unwrap(), vec![j.eval(&z)]);
    }
    assert_eq!(
        momentum(&spec, &ints(&[1, 0, 0]), &ints(&[0, 1, 0])).unwrap(),
        ints(&[1])
    );
}

#[test]
fn finite_spec_has_no_momentum() {
    let spec = fixture("z2z2_plane");
    assert!(momentum(&spec, &ints(&[1, 2]), &ints(&[3, 4]))
        .unwrap()
        .is_empty());
    assert_eq!(fiber_zero_basis(&spec, &ints(&[1, 2])).unwrap().len(), 2);
}

#[test]
fn momentum_rejects_wrong_length() {
    let spec = fixture("example");
    let err = momentum(&spec, &ints(&[1, 2]), &ints(&[1, 2, 3])).unwrap_err();
    assert_eq!(
        err,
        Error::DimensionMismatch {
            expected: 3,
            got: 2
        }
    );
}

#[test]
fn zero_fiber_dimensions() {
    let spec = fixture("example");
    for (m, d) in [
        ([0, 0, 0], 3),
        ([0, 0, 1], 3),
        ([1, 0, 0], 2),
        ([1, 2, 3], 2),
    ] {
        let m = ints(&m);
        let basis = fiber_zero_basis(&spec, &m).unwrap();
        assert_eq!(basis.len(), d);
        for p in &basis {
            assert_eq!(momentum(&spec, &m, p).unwrap(), ints(&[0]));
        }
    }
}

#[test]
fn fiber_decomposition_splits_annihilator() {
    for name in BUNDLED {
        let spec = fixture(name);
        for s in isotropy_lattice(&spec, 42).unwrap().strata {
            let d = fiber_decomposition(&spec, &s.witness).unwrap();
            assert_eq!(d.class, s.class);
            assert_eq!(
                d.cotangent_part.len() + d.conormal_part.len(),
                d.annihilator.len()
            );
            for a in &d.cotangent_part {
                for b in &d.conormal_part {
                    assert_eq!(dot(a, b), rat(0, 1));
                }
            }
            let all: Vec<_> = d
                .cotangent_part
                .iter()
                .chain(&d.conormal_part)
                .cloned()
                .collect();
            assert_eq!(rank(&all, spec.n(), 0.0), d.annihilator.len());
            for p in &all {
                assert!(momentum(&spec, &s.witness, p)
                    .unwrap()
                    .iter()
                    .all(|x| *x == rat(0, 1)));
            }
        }
    }
}

#[test]
fn fiber_classes_are_down_sets_at_witnesses() {
    for name in BUNDLED {
        let spec = fixture(name);
        let l = isotropy_lattice(&spec, 42).unwrap();
        for (i, s) in l.strata.iter().enumerate() {
            let got = sample_fiber_classes(&spec, &l, &s.witness, 2_000, 42).unwrap();
            assert_eq!(ids(&got), ids(l.down_set(i)), "{name} {}", s.class.id);
        }
    }
}

#[test]
fn fiber_classes_at_fixture_points() {
    let spec = fixture("example");
    let l = isotropy_lattice(&spec, 42).unwrap();
    assert_eq!(spec.fixtures().fiber_witnesses.len(), 4);
    for fw in &spec.fixtures().fiber_witnesses {
        let m: Vec<BigRational> = fw.point.iter().map(|r| r.0.clone()).collect();
        let got = ids(&sample_fiber_classes(&spec, &l, &m, 500, 3).unwrap());
        let mut want = fw.classes.clone();
        want.sort();
        assert_eq!(got, want);
    }
}

#[test]
fn zero_budget_is_rejected() {
    let spec = fixture("example");
    let l = isotropy_lattice(&spec, 42).unwrap();
    let err = sample_fiber_classes(&spec, &l, &ints(&[0, 0, 0]), 0, 42).unwrap_err();
    assert_eq!(err, Error::InvalidBudget);
}

#[test]
fn conormal_classes_are_down_sets() {
    for name in BUNDLED {
        let spec = fixture(name);
        let l = isotropy_lattice(&spec, 42).unwrap();
        for s in &l.strata {
            let want = conormal_orbit_types(&l, &s.class).unwrap();
            let got = sample_conormal_classes(&spec, &l, &s.class, 500, 42).unwrap();
            assert_eq!(ids(&got), ids(&want), "{name} {}", s.class.id);
        }
    }
}

#[test]
fn example_conormal_at_origin() {
    let spec = fixture("example");
    let l = isotropy_lattice(&spec, 42).unwrap();
    let g = l.class(l.index_of("Z2xS1").unwrap()).clone();
    let got: BTreeSet<String> = conormal_orbit_types(&l, &g)
        .unwrap()
        .into_iter()
        .map(|c| c.id)
        .collect();
    assert_eq!(got.len(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Every observed class lies below the base class, at any budget.
    #[test]
    fn observed_classes_lie_below(i in 0..BUNDLED.len(), budget in 1usize..6, seed in any::<u64>()) {
        let spec = fixture(BUNDLED[i]);
        let l = isotropy_lattice(&spec, 42).unwrap();
        for (h, s) in l.strata.iter().enumerate() {
            let got = sample_fiber_classes(&spec, &l, &s.witness, budget, seed).unwrap();
            for c in &got {
                let j = l.index_of(&c.id).unwrap();
                prop_assert!(l.order.leq(j, h));
            }
        }
    }

    #[test]
    fn sampled_covectors_annihilate_orbit(i in 0..BUNDLED.len(), seed in any::<u64>()) {
        let spec = fixture(BUNDLED[i]);
        let l = isotropy_lattice(&spec, seed).unwrap();
        let mut rng = stream(seed, 9);
        for s in &l.strata {
            let basis = fiber_zero_basis(&spec, &s.witness).unwrap();
            let p: Vec<BigRational> = ball_in_span(&basis, spec.n(), COVECTOR_DENOMINATOR, &mut rng);
            prop_assert!(momentum(&spec, &s.witness, &p).unwrap().iter().all(|x| *x == rat(0, 1)));
            let norm: f64 = p.iter().map(|x| x.to_f64().unwrap().powi(2)).sum();
            prop_assert!(norm <= 1.0 + 1e-4);
        }
    }

    #[test]
    fn zero_level_is_invariant(seed in any::<u64>()) {
        let spec = fixture("example");
        let mut rng = stream(seed, 1);
        let m = ints(&[3, -1, 2]);
        let basis = fiber_zero_basis(&spec, &m).unwrap();
        let p: Vec<BigRational> = ball_in_span(&basis, 3, COVECTOR_DENOMINATOR, &mut rng);
        let g = spec.random_exact_element(&mut rng);
        let (gm, gp) = spec.cotangent_act(&g, &m, &p).unwrap();
        prop_assert_eq!(momentum(&spec, &gm, &gp).unwrap(), ints(&[0]));
    }
}
