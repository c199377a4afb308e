//! Standard fans shipped with the crate.

use crate::fan::{Fan, LatticeVector};

/// Smooth complete threefold with nine rays and fourteen maximal cones whose
/// first-order deformations are obstructed.
pub const NINE_RAY_JSON: &str = include_str!("../fixtures/nine_ray.json");
pub const P2_JSON: &str = include_str!("../fixtures/p2.json");
pub const P3_JSON: &str = include_str!("../fixtures/p3.json");
pub const P1_CUBED_JSON: &str = include_str!("../fixtures/p1xp1xp1.json");
pub const HIRZEBRUCH_JSON: [&str; 4] = [
    include_str!("../fixtures/hirzebruch0.json"),
    include_str!("../fixtures/hirzebruch1.json"),
    include_str!("../fixtures/hirzebruch2.json"),
    include_str!("../fixtures/hirzebruch3.json"),
];

pub fn nine_ray() -> Fan {
    Fan::from_json(NINE_RAY_JSON).expect("shipped fixture")
}

/// Fan of projective space: `e_1, …, e_n, -(e_1 + … + e_n)`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays = Vec::with_capacity(n + 1);
    for i in 0..n {
        let mut v = vec![0i64; n];
        v[i] = 1;
        rays.push(LatticeVector::from_i64(&v));
    }
    rays.push(LatticeVector::from_i64(&vec![-1i64; n]));
    let mut cones: Vec<Vec<usize>> = (0..=n)
        .map(|skip| (0..=n).filter(|&i| i != skip).collect())
        .collect();
    cones.sort();
    Fan::new(n, rays, cones).expect("projective space")
}

/// Fan of `(P^1)^n`.
pub fn product_of_lines(n: usize) -> Fan {
    let mut rays = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1i64, -1] {
            let mut v = vec![0i64; n];
            v[i] = s;
            rays.push(LatticeVector::from_i64(&v));
        }
    }
    let mut cones: Vec<Vec<usize>> = (0..(1usize << n))
        .map(|mask| (0..n).map(|i| 2 * i + ((mask >> i) & 1)).collect())
        .collect();
    cones.sort();
    Fan::new(n, rays, cones).expect("product of lines")
}

/// Hirzebruch surface `F_a`: rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch(a: i64) -> Fan {
    Fan::from_i64(
        2,
        &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[0, 3]],
    )
    .expect("Hirzebruch surface")
}

/// Projectivization of `O ⊕ O(a)` over `P^2`.
pub fn p1_bundle_over_p2(a: i64) -> Fan {
    let rays: [&[i64]; 5] = [&[1, 0, 0], &[0, 1, 0], &[-1, -1, a], &[0, 0, 1], &[0, 0, -1]];
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        for t in [3, 4] {
            cones.push(vec![i, j, t]);
        }
    }
    let cone_refs: Vec<&[usize]> = cones.iter().map(Vec::as_slice).collect();
    Fan::from_i64(3, &rays, &cone_refs).expect("P^1-bundle over P^2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_json_matches_constructors() {
        assert_eq!(Fan::from_json(P3_JSON).unwrap().to_json(), projective_space(3).to_json());
        assert_eq!(Fan::from_json(P2_JSON).unwrap().to_json(), projective_space(2).to_json());
        assert_eq!(Fan::from_json(P1_CUBED_JSON).unwrap().to_json(), product_of_lines(3).to_json());
        for (a, text) in HIRZEBRUCH_JSON.iter().enumerate() {
            assert_eq!(Fan::from_json(text).unwrap().to_json(), hirzebruch(a as i64).to_json());
            assert_eq!(Fan::from_json(text).unwrap().to_json(), *text);
        }
    }

    #[test]
    fn bundles_are_smooth_and_complete() {
        for a in 0..3 {
            let f = p1_bundle_over_p2(a).flags();
            assert!(f.is_smooth && f.is_complete);
        }
    }
}
