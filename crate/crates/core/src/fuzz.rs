//! Seeded random smooth complete fans and lattice symmetries for
//! differential testing.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan, LatticeVector};
use crate::fixtures;

/// Star subdivision along the cone spanned by `face`: adds the ray
/// `Σ face` and replaces every maximal cone `σ ⊇ face` by the cones
/// `σ \ {v} ∪ {new}` for `v ∈ face`. Keeps smooth complete fans smooth and
/// complete.
pub fn star_subdivide(fan: &Fan, face: &[usize]) -> Result<Fan> {
    if face.len() < 2 {
        return Err(Error::Contract("a star subdivision needs at least two rays".into()));
    }
    if !fan.in_common_cone(face) {
        return Err(Error::Contract("rays do not span a cone of the fan".into()));
    }
    let mut rays: Vec<LatticeVector> = fan.rays().to_vec();
    let new_ray = face[1..].iter().fold(fan.ray(face[0]).clone(), |acc, &r| acc.add(fan.ray(r)));
    let new_index = rays.len();
    rays.push(new_ray);
    let mut cones = Vec::new();
    for c in fan.max_cones() {
        if c.contains_all(face) {
            for &v in face {
                let mut rs: Vec<usize> = c.rays().iter().copied().filter(|&r| r != v).collect();
                rs.push(new_index);
                rs.sort_unstable();
                cones.push(rs);
            }
        } else {
            cones.push(c.rays().to_vec());
        }
    }
    cones.sort();
    Fan::new(fan.rank(), rays, cones)
}

fn seed_fan(rng: &mut ChaCha8Rng) -> Fan {
    match rng.random_range(0..9) {
        0 => fixtures::projective_space(2),
        1 => fixtures::hirzebruch(rng.random_range(0..=3)),
        2 => fixtures::projective_space(3),
        3 => fixtures::product_of_lines(3),
        4 => fixtures::product_of_lines(2),
        5 | 6 => fixtures::p1_bundle_over_p2(rng.random_range(0..=2)),
        7 => fixtures::hirzebruch(rng.random_range(1..=4)),
        _ => fixtures::nine_ray(),
    }
}

/// A random smooth complete fan of rank 2 or 3: a standard seed followed by
/// up to three star subdivisions.
pub fn random_smooth_fan(rng: &mut ChaCha8Rng) -> Fan {
    let mut fan = seed_fan(rng);
    let steps = rng.random_range(0..=3);
    for _ in 0..steps {
        let cone = fan.max_cones()[rng.random_range(0..fan.num_cones())].clone();
        let size = rng.random_range(2..=cone.len());
        let mut rays = cone.rays().to_vec();
        rays.shuffle(rng);
        rays.truncate(size);
        rays.sort_unstable();
        fan = star_subdivide(&fan, &rays).expect("subdivision of a smooth fan");
    }
    fan
}

/// `count` fans from a fixed seed.
pub fn random_fans(seed: u64, count: usize) -> Vec<Fan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_smooth_fan(&mut rng)).collect()
}

/// Renumbering of rays and maximal cones.
#[derive(Debug, Clone)]
pub struct Relabeling {
    /// New index of each old ray.
    pub rays: Vec<usize>,
    pub fan: Fan,
}

pub fn relabel(fan: &Fan, rng: &mut ChaCha8Rng) -> Relabeling {
    let n = fan.num_rays();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rays = vec![LatticeVector::zero(fan.rank()); n];
    for (old, &new) in perm.iter().enumerate() {
        rays[new] = fan.ray(old).clone();
    }
    let mut cones: Vec<Vec<usize>> = fan
        .max_cones()
        .iter()
        .map(|c| c.rays().iter().map(|&r| perm[r]).collect())
        .collect();
    cones.shuffle(rng);
    let fan = Fan::new(fan.rank(), rays, cones).expect("relabeled fan");
    Relabeling { rays: perm, fan }
}

/// Integer matrix of determinant ±1 together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unimodular {
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
}

impl Unimodular {
    pub fn identity(n: usize) -> Self {
        let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self {
            matrix: m.clone(),
            inverse: m,
        }
    }

    /// Product of a few random elementary row operations.
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut u = Self::identity(n);
        if n < 2 {
            return u;
        }
        for _ in 0..rng.random_range(1..=4) {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            match rng.random_range(0..3) {
                0 => {
                    // row_i += k row_j; the inverse subtracts column i from column j
                    let k = rng.random_range(-2..=2);
                    for c in 0..n {
                        u.matrix[i][c] += k * u.matrix[j][c];
                    }
                    for r in 0..n {
                        u.inverse[r][j] -= k * u.inverse[r][i];
                    }
                }
                1 => {
                    u.matrix.swap(i, j);
                    for r in 0..n {
                        u.inverse[r].swap(i, j);
                    }
                }
                _ => {
                    for c in 0..n {
                        u.matrix[i][c] = -u.matrix[i][c];
                    }
                    for r in 0..n {
                        u.inverse[r][i] = -u.inverse[r][i];
                    }
                }
            }
        }
        u
    }

    pub fn apply(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(
            self.matrix
                .iter()
                .map(|row| row.iter().zip(v.coords()).map(|(&a, x)| BigInt::from(a) * x).sum())
                .collect(),
        )
    }

    /// Dual action on degrees, preserving every pairing: `u ↦ M^{-T} u`.
    pub fn apply_dual(&self, u: &DegreeVector) -> DegreeVector {
        let n = self.inverse.len();
        DegreeVector::new(
            (0..n)
                .map(|c| (0..n).map(|r| BigInt::from(self.inverse[r][c]) * &u.coords()[r]).sum())
                .collect(),
        )
    }

    pub fn transform(&self, fan: &Fan) -> Fan {
        let rays = fan.rays().iter().map(|r| self.apply(r)).collect();
        let cones = fan.max_cones().iter().map(|c| c.rays().to_vec()).collect();
        Fan::new(fan.rank(), rays, cones).expect("unimodular image of a fan")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::dot;

    #[test]
    fn subdivisions_stay_smooth_and_complete() {
        for fan in random_fans(7, 40) {
            assert!(fan.rank() == 2 || fan.rank() == 3);
            let flags = fan.flags();
            assert!(flags.is_smooth && flags.is_complete, "{}", fan.to_json());
        }
    }

    #[test]
    fn blowup_of_p2_is_f1() {
        let fan = star_subdivide(&fixtures::projective_space(2), &[0, 1]).unwrap();
        assert_eq!(fan.num_rays(), 4);
        assert_eq!(fan.num_cones(), 4);
        assert!(star_subdivide(&fan, &[0]).is_err());
    }

    #[test]
    fn seeds_are_reproducible() {
        let a: Vec<String> = random_fans(3, 5).iter().map(Fan::to_json).collect();
        let b: Vec<String> = random_fans(3, 5).iter().map(Fan::to_json).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn unimodular_inverse_and_pairings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = Unimodular::random(3, &mut rng);
            for i in 0..3 {
                for j in 0..3 {
                    let s: i64 = (0..3).map(|k| m.matrix[i][k] * m.inverse[k][j]).sum();
                    assert_eq!(s, i64::from(i == j));
                }
            }
            let v = LatticeVector::from_i64(&[2, -1, 5]);
            let u = DegreeVector::from_i64(&[-3, 4, 1]);
            assert_eq!(dot(&m.apply(&v), &m.apply_dual(&u)).unwrap(), dot(&v, &u).unwrap());
        }
    }
}
