mod common;

use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_deform::cup;
use toric_deform::fuzz::{self, Unimodular};
use toric_deform::graded::{self, FirstOrderClass};
use toric_deform::{fixtures, DegreeVector, Fan};

use common::*;

type Row = (usize, DegreeVector, usize, usize, Vec<Vec<usize>>);

fn table_rows(fan: &Fan, ray_map: impl Fn(usize) -> usize, deg_map: impl Fn(&DegreeVector) -> DegreeVector) -> BTreeSet<Row> {
    graded::compute_table(fan)
        .unwrap()
        .entries
        .into_iter()
        .map(|e| {
            let mut comps: Vec<Vec<usize>> = e
                .components
                .iter()
                .map(|c| {
                    let mut c: Vec<usize> = c.iter().map(|&r| ray_map(r)).collect();
                    c.sort_unstable();
                    c
                })
                .collect();
            comps.sort();
            (ray_map(e.ray), deg_map(&e.u), e.h1, e.h2, comps)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tables_are_invariant_under_relabeling(fan in any_fan(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let re = fuzz::relabel(&fan, &mut rng);
        let before = table_rows(&fan, |r| re.rays[r], Clone::clone);
        let after = table_rows(&re.fan, |r| r, Clone::clone);
        prop_assert_eq!(before, after);
        prop_assert_eq!(
            cup::obstruction_scan(&fan).unwrap().obstructed(),
            cup::obstruction_scan(&re.fan).unwrap().obstructed()
        );
    }

    #[test]
    fn tables_are_invariant_under_lattice_automorphisms(fan in any_fan(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Unimodular::random(fan.rank(), &mut rng);
        let image = m.transform(&fan);
        let before = table_rows(&fan, |r| r, |u| m.apply_dual(u));
        let after = table_rows(&image, |r| r, Clone::clone);
        prop_assert_eq!(before, after);
        prop_assert_eq!(
            cup::obstruction_scan(&fan).unwrap().obstructions.len(),
            cup::obstruction_scan(&image).unwrap().obstructions.len()
        );
    }

    #[test]
    fn membership_passes_to_faces(
        fan in any_fan(),
        ray_pick in any::<prop::sample::Index>(),
        coords in prop::collection::vec(-3i64..=3, 3),
        mask in any::<u8>(),
    ) {
        let ray = ray_pick.index(fan.num_rays());
        let u = d(&coords[..fan.rank()]);
        for c in fan.max_cones() {
            if fan.section_membership(ray, &u, c.rays()).unwrap() {
                let face: Vec<usize> = c.rays().iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &r)| r).collect();
                prop_assert!(fan.section_membership(ray, &u, &face).unwrap());
            }
        }
    }

    #[test]
    fn cup_cocycle_is_bilinear(c in prop::collection::vec(-4i64..=4, 4)) {
        let fan = fixtures::nine_ray();
        let (u, u2) = (d(&[-1, 0, 0]), d(&[0, -1, 0]));
        let q = |n: i64| BigRational::from_integer(n.into());
        let a = FirstOrderClass::new(&fan, 0, &u, vec![q(c[0]), q(c[1])]).unwrap();
        let b = FirstOrderClass::new(&fan, 5, &u2, vec![q(c[2]), q(c[3])]).unwrap();
        let g = cup::cup_cocycle(&fan, &a, &b).unwrap().g.unwrap();
        let mut expected = toric_deform::cochain::CechCochain::new(1);
        for i in 0..2 {
            for j in 0..2 {
                let ei = FirstOrderClass::component(&fan, 0, &u, i).unwrap();
                let ej = FirstOrderClass::component(&fan, 5, &u2, j).unwrap();
                let gij = cup::cup_cocycle(&fan, &ei, &ej).unwrap().g.unwrap();
                expected = expected.add(&gij.scale(&q(c[i] * c[2 + j])));
            }
        }
        prop_assert_eq!(&g, &expected);
        let vanishes = cup::cup_cocycle(&fan, &a, &b).unwrap().vanishes;
        prop_assert_eq!(vanishes, (c[0] - c[1]) * (c[2] - c[3]) == 0);
    }
}
