mod common;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use toric_deform::certificate::{self, ReducedCycle};
use toric_deform::cup;
use toric_deform::support::SupportComplex;
use toric_deform::{degree_scan, fixtures};

use common::*;

fn reduced_pieces(fan: &toric_deform::Fan, k: &SupportComplex) -> Vec<ReducedCycle> {
    certificate::fundamental_cycles(k)
        .iter()
        .flat_map(|c| certificate::reduce_cycle(fan, k, c))
        .collect()
}

#[test]
fn nine_ray_pictured_cycle_values() {
    let fan = fixtures::nine_ray();
    let k = SupportComplex::build(&fan, 0, &d(&[-1, -1, 0])).unwrap();
    let alpha = ReducedCycle::new(&fan, &k, vec![7, 2, 3, 1, 6, 5]).unwrap();
    let half = BigRational::new((-1).into(), 2.into());
    let r = certificate::pairing(&fan, &alpha, &[1, 2, 3, 4], &[6], &half);
    assert_eq!(r.relevant.len(), 2);
    assert_eq!(r.value.abs(), BigRational::from_integer(1.into()));
    let back = certificate::pairing(&fan, &alpha.reverse(), &[1, 2, 3, 4], &[6], &half);
    assert_eq!(back.value, -r.value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn certificate_values_match_the_cocycle(fan in any_fan()) {
        for (a, b) in target_pairs(&fan) {
            let report = cup::cup_cocycle(&fan, &a, &b).unwrap();
            let g = report.g.clone().unwrap();
            for cert in certificate::certificates(&fan, &a, &b).unwrap() {
                prop_assert_eq!(certificate::pullback_check(&g, &cert.alpha), cert.value.clone());
                let rev = cert.alpha.reverse();
                prop_assert_eq!(certificate::pullback_check(&g, &rev), -cert.value.clone());
            }
            let none = certificate::nonzero_certificates(&fan, &a, &b).unwrap().is_empty();
            prop_assert_eq!(none, report.vanishes);
        }
    }

    #[test]
    fn pullback_ignores_the_cone_choice(fan in any_fan()) {
        for (a, b) in target_pairs(&fan).into_iter().take(4) {
            let g = cup::cup_cocycle(&fan, &a, &b).unwrap().g.unwrap();
            for cert in certificate::certificates(&fan, &a, &b).unwrap() {
                let alpha = &cert.alpha;
                for i in 0..alpha.len() {
                    for s in certificate::valid_sigmas(&fan, &alpha.vertices, i) {
                        let mut alt = alpha.clone();
                        alt.sigma_choice[i] = s;
                        prop_assert_eq!(certificate::pullback_check(&g, &alt), cert.value.clone());
                    }
                }
            }
        }
    }

    #[test]
    fn homologous_cycles_pair_equally(fan in any_fan()) {
        for (a, b) in target_pairs(&fan).into_iter().take(4) {
            let report = cup::cup_cocycle(&fan, &a, &b).unwrap();
            let (g, t) = (report.g.unwrap(), report.target.unwrap());
            let k = SupportComplex::build(&fan, t.ray, &t.u).unwrap();
            let pieces = reduced_pieces(&fan, &k);
            for x in &pieces {
                for y in &pieces {
                    let (cx, cy) = (x.chain(&k), y.chain(&k));
                    let diff: Vec<BigRational> = cx.iter().zip(&cy).map(|(p, q)| p - q).collect();
                    if certificate::is_boundary(&k, &diff) {
                        prop_assert_eq!(certificate::pullback_check(&g, x), certificate::pullback_check(&g, y));
                    }
                }
            }
        }
    }

    #[test]
    fn cover_and_simplicial_cohomology_agree(fan in any_fan(), ray_pick in any::<prop::sample::Index>()) {
        let ray = ray_pick.index(fan.num_rays());
        for c in degree_scan::candidate_degrees(&fan, ray).unwrap() {
            let k = SupportComplex::build(&fan, ray, &c.u).unwrap();
            if k.is_empty() {
                continue;
            }
            let cx = k.closed_cover_complex();
            prop_assert_eq!(cx.h0_dim(), k.reduced_h0_dim() + 1);
            prop_assert_eq!(cx.h1_dim(), k.simplicial_h1_dim());
        }
    }

    #[test]
    fn basis_cycles_are_independent_and_complete(fan in any_fan(), ray_pick in any::<prop::sample::Index>()) {
        let ray = ray_pick.index(fan.num_rays());
        for c in degree_scan::candidate_degrees(&fan, ray).unwrap() {
            let w = &c.u;
            let k = SupportComplex::build(&fan, ray, w).unwrap();
            let cycles = certificate::find_reduced_cycles(&fan, &k);
            prop_assert_eq!(cycles.len(), k.simplicial_h1_dim());
            for z in &cycles {
                prop_assert!(!certificate::is_boundary(&k, &z.chain(&k)));
                prop_assert!(z.chain(&k).iter().any(|v| !v.is_zero()));
            }
        }
    }
}
