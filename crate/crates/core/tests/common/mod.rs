#![allow(dead_code)]

use proptest::prelude::*;
use toric_deform::cup::{self, CupSelection};
use toric_deform::graded::{self, FirstOrderClass};
use toric_deform::{fixtures, fuzz, DegreeVector, Fan};

pub fn d(xs: &[i64]) -> DegreeVector {
    DegreeVector::from_i64(xs)
}

pub fn fan_from_seed(seed: u64) -> Fan {
    fuzz::random_fans(seed, 1).pop().unwrap()
}

pub fn any_fan() -> impl Strategy<Value = Fan> {
    any::<u64>().prop_map(fan_from_seed)
}

pub fn named_fixtures() -> Vec<(&'static str, Fan)> {
    let mut v = vec![
        ("nine_ray", fixtures::nine_ray()),
        ("P3", fixtures::projective_space(3)),
        ("P1xP1xP1", fixtures::product_of_lines(3)),
    ];
    for (a, name) in ["F0", "F1", "F2", "F3"].into_iter().enumerate() {
        v.push((name, fixtures::hirzebruch(a as i64)));
    }
    v
}

/// Pairs of component classes whose product has a target summand.
pub fn target_pairs(fan: &Fan) -> Vec<(FirstOrderClass, FirstOrderClass)> {
    let table = graded::compute_table(fan).unwrap();
    let classes: Vec<Vec<FirstOrderClass>> = table
        .h1_entries()
        .map(|e| graded::component_classes(fan, e.ray, &e.u).unwrap())
        .collect();
    let mut out = Vec::new();
    for i in 0..classes.len() {
        for j in i..classes.len() {
            let (a, b) = (&classes[i][0], &classes[j][0]);
            if let CupSelection::Target { .. } = cup::cup_degree_rule(fan, a.ray, &a.u, b.ray, &b.u).unwrap() {
                for x in &classes[i] {
                    for y in &classes[j] {
                        out.push((x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    out
}
