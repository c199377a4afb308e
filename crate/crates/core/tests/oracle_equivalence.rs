mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use toric_deform::{agreement, degree_scan, graded, oracle, DegreeVector};

use common::*;

#[test]
fn fixture_dimensions_match_the_oracle() {
    for (name, fan) in named_fixtures() {
        let (probes, bad) = agreement::dimension_agreement(&fan).unwrap();
        assert!(probes > 0, "{name}");
        assert!(bad.is_empty(), "{name}: {bad:?}");
    }
}

#[test]
fn off_candidate_box_degrees_are_zero() {
    for (name, fan) in named_fixtures() {
        for ray in 0..fan.num_rays() {
            let cands: BTreeSet<DegreeVector> =
                degree_scan::candidate_degrees(&fan, ray).unwrap().into_iter().map(|c| c.u).collect();
            for c in degree_scan::box_degrees(&fan, ray, 2) {
                if cands.contains(&c.u) {
                    continue;
                }
                let e = graded::entry(&fan, ray, &c.u).unwrap();
                assert_eq!((e.h1, e.h2), (0, 0), "{name} ray {ray} u {}", c.u);
                let cx = oracle::DivisorCechComplex::build(&fan, ray, &c.u, 3).unwrap();
                assert_eq!((cx.cohomology_dim(1), cx.cohomology_dim(2)), (0, 0), "{name} ray {ray} u {}", c.u);
            }
        }
    }
}

#[test]
fn nine_ray_products_agree_across_routes() {
    let a = agreement::check_fan(&toric_deform::fixtures::nine_ray()).unwrap();
    assert!(a.passed(), "{a:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_fans_match_the_oracle(fan in any_fan()) {
        let (_, bad) = agreement::dimension_agreement(&fan).unwrap();
        prop_assert!(bad.is_empty(), "{:?}\n{}", bad, fan.to_json());
    }

    #[test]
    fn cohomology_vanishes_off_the_hyperplane(
        fan in any_fan(),
        ray_pick in any::<prop::sample::Index>(),
        coords in prop::collection::vec(-3i64..=3, 3),
    ) {
        let ray = ray_pick.index(fan.num_rays());
        let u = d(&coords[..fan.rank()]);
        prop_assume!(fan.pairing(ray, &u).unwrap() != (-1).into());
        let cx = oracle::DivisorCechComplex::build(&fan, ray, &u, 3).unwrap();
        prop_assert_eq!(cx.cohomology_dim(1), 0);
        prop_assert_eq!(cx.cohomology_dim(2), 0);
    }

    #[test]
    fn candidates_cover_every_box_degree_with_cohomology(fan in any_fan(), ray_pick in any::<prop::sample::Index>()) {
        let ray = ray_pick.index(fan.num_rays());
        let cands: BTreeSet<DegreeVector> =
            degree_scan::candidate_degrees(&fan, ray).unwrap().into_iter().map(|c| c.u).collect();
        for c in degree_scan::box_degrees(&fan, ray, 2) {
            let e = graded::entry(&fan, ray, &c.u).unwrap();
            if e.h1 > 0 || e.h2 > 0 {
                prop_assert!(cands.contains(&c.u), "ray {} u {}", ray, c.u);
            }
        }
    }
}
