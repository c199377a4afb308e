//! Multigraded tables of `H^1(X, T_X)` and `H^2(X, T_X)`, and explicit
//! first-order classes built from connected components.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cochain::CechCochain;
use crate::degree_scan;
use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan};
use crate::support::SupportComplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedEntry {
    pub ray: usize,
    pub u: DegreeVector,
    /// `dim H̃^0(Γ_{ρ,u})`
    pub h1: usize,
    /// `dim H^1(K_{ρ,u})`
    pub h2: usize,
    /// Components of `Γ_{ρ,u}`, each a sorted list of rays.
    pub components: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedTable {
    /// Nonzero entries, sorted by `(ray, u)`.
    pub entries: Vec<GradedEntry>,
    pub h1_total: usize,
    pub h2_total: usize,
    /// False when degrees came from a manual box instead of the face scan.
    pub certified: bool,
}

impl GradedTable {
    pub fn h1_entries(&self) -> impl Iterator<Item = &GradedEntry> {
        self.entries.iter().filter(|e| e.h1 > 0)
    }

    pub fn h2_entries(&self) -> impl Iterator<Item = &GradedEntry> {
        self.entries.iter().filter(|e| e.h2 > 0)
    }

    pub fn get(&self, ray: usize, u: &DegreeVector) -> Option<&GradedEntry> {
        self.entries.iter().find(|e| e.ray == ray && &e.u == u)
    }
}

/// Where candidate degrees come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeSource {
    /// Lattice points of bounded faces; exhaustive.
    Faces,
    /// Every slice degree with coordinates in `[-r, r]`.
    Box(u32),
}

pub fn entry(fan: &Fan, ray: usize, u: &DegreeVector) -> Result<GradedEntry> {
    let k = SupportComplex::build(fan, ray, u)?;
    Ok(GradedEntry {
        ray,
        u: u.clone(),
        h1: k.reduced_h0_dim(),
        h2: k.simplicial_h1_dim(),
        components: k.components().components,
    })
}

pub fn compute_table(fan: &Fan) -> Result<GradedTable> {
    compute_table_with(fan, DegreeSource::Faces)
}

pub fn compute_table_with(fan: &Fan, source: DegreeSource) -> Result<GradedTable> {
    fan.ensure_complete()?;
    let mut entries = Vec::new();
    for ray in 0..fan.num_rays() {
        let candidates = match source {
            DegreeSource::Faces => degree_scan::candidate_degrees(fan, ray)?,
            DegreeSource::Box(r) => degree_scan::box_degrees(fan, ray, r),
        };
        for c in candidates {
            let e = entry(fan, ray, &c.u)?;
            if e.h1 > 0 || e.h2 > 0 {
                entries.push(e);
            }
        }
    }
    entries.sort_by(|a, b| (a.ray, &a.u).cmp(&(b.ray, &b.u)));
    let h1_total = entries.iter().map(|e| e.h1).sum();
    let h2_total = entries.iter().map(|e| e.h2).sum();
    Ok(GradedTable {
        entries,
        h1_total,
        h2_total,
        certified: source == DegreeSource::Faces,
    })
}

/// `f(Z)`: 1 on every maximal cone meeting `component`, 0 elsewhere.
pub fn component_cochain(fan: &Fan, component: &[usize]) -> CechCochain {
    CechCochain::indicator(
        fan.max_cones()
            .iter()
            .enumerate()
            .filter(|(_, c)| component.iter().any(|&r| c.contains(r)))
            .map(|(k, _)| k),
    )
}

/// An element of `H̃^0(Γ_{ρ,u})` written as `Σ c_Z f(Z)` over the components
/// of `Γ_{ρ,u}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstOrderClass {
    pub ray: usize,
    pub u: DegreeVector,
    pub components: Vec<Vec<usize>>,
    pub coefficients: Vec<BigRational>,
}

impl FirstOrderClass {
    /// The class of a combination of components. Fails unless `(ray, u)`
    /// lies on the slice and the coefficient count matches.
    pub fn new(fan: &Fan, ray: usize, u: &DegreeVector, coefficients: Vec<BigRational>) -> Result<Self> {
        let pairing = fan.pairing(ray, u)?;
        if pairing != (-1).into() {
            return Err(Error::Contract(format!("ray {ray} pairs to {pairing} with {u}, expected -1")));
        }
        let components = SupportComplex::build(fan, ray, u)?.components().components;
        if coefficients.len() != components.len() {
            return Err(Error::Contract(format!(
                "{} coefficients for {} components",
                coefficients.len(),
                components.len()
            )));
        }
        Ok(Self {
            ray,
            u: u.clone(),
            components,
            coefficients,
        })
    }

    /// `f(Z)` for the component with the given index.
    pub fn component(fan: &Fan, ray: usize, u: &DegreeVector, index: usize) -> Result<Self> {
        let n = SupportComplex::build(fan, ray, u)?.components().count();
        if index >= n {
            return Err(Error::Contract(format!("component {index} out of range ({n} components)")));
        }
        let mut c = vec![BigRational::zero(); n];
        c[index] = BigRational::one();
        Self::new(fan, ray, u, c)
    }

    pub fn cochain(&self, fan: &Fan) -> CechCochain {
        let mut acc = CechCochain::new(0);
        for (comp, c) in self.components.iter().zip(&self.coefficients) {
            if !c.is_zero() {
                acc = acc.add(&component_cochain(fan, comp).scale(c));
            }
        }
        acc
    }

    /// Whether the class is zero in reduced cohomology: all coefficients
    /// equal.
    pub fn is_trivial(&self) -> bool {
        self.coefficients.windows(2).all(|w| w[0] == w[1])
    }

    pub fn combine(&self, other: &Self, a: &BigRational, b: &BigRational) -> Result<Self> {
        if self.ray != other.ray || self.u != other.u {
            return Err(Error::Contract("classes live in different degrees".into()));
        }
        Ok(Self {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            ..self.clone()
        })
    }
}

/// One class `f(Z)` per component of `Γ_{ρ,u}`.
pub fn component_classes(fan: &Fan, ray: usize, u: &DegreeVector) -> Result<Vec<FirstOrderClass>> {
    let n = SupportComplex::build(fan, ray, u)?.components().count();
    (0..n).map(|i| FirstOrderClass::component(fan, ray, u, i)).collect()
}

/// Basis of `H̃^0(Γ_{ρ,u})`: `f(Z_i) - f(Z_0)` for `i >= 1`, where `Z_0` is
/// the component with the least ray.
pub fn first_order_basis(fan: &Fan, ray: usize, u: &DegreeVector) -> Result<Vec<FirstOrderClass>> {
    let classes = component_classes(fan, ray, u)?;
    if classes.len() < 2 {
        log::warn!("no first-order classes in degree {u} for ray {ray}");
        return Ok(Vec::new());
    }
    let anchor = &classes[0];
    classes[1..]
        .iter()
        .map(|c| c.combine(anchor, &BigRational::one(), &-BigRational::one()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn d(xs: &[i64]) -> DegreeVector {
        DegreeVector::from_i64(xs)
    }

    #[test]
    fn nine_ray_table() {
        let fan = fixtures::nine_ray();
        let t = compute_table(&fan).unwrap();
        let e = t.get(0, &d(&[-1, 0, 0])).unwrap();
        assert_eq!(e.h1, 1);
        assert_eq!(e.components, vec![vec![1, 2, 3, 4], vec![5]]);
        let e = t.get(5, &d(&[0, -1, 0])).unwrap();
        assert_eq!(e.h1, 1);
        assert_eq!(e.components, vec![vec![6], vec![7]]);
        for ray in 0..fan.num_rays() {
            for u in [d(&[-1, 0, 0]), d(&[0, -1, 0])] {
                if (ray, &u) != (0, &d(&[-1, 0, 0])) && (ray, &u) != (5, &d(&[0, -1, 0])) {
                    assert_eq!(entry(&fan, ray, &u).unwrap().h1, 0);
                }
            }
        }
        assert_eq!(t.get(0, &d(&[-1, -1, 0])).unwrap().h2, 1);
        assert!(t.certified);
    }

    #[test]
    fn rigid_and_hirzebruch_totals() {
        assert_eq!(compute_table(&fixtures::projective_space(3)).unwrap().h1_total, 0);
        assert_eq!(compute_table(&fixtures::projective_space(2)).unwrap().h1_total, 0);
        assert_eq!(compute_table(&fixtures::product_of_lines(3)).unwrap().h1_total, 0);
        assert_eq!(compute_table(&fixtures::hirzebruch(2)).unwrap().h1_total, 1);
        assert_eq!(compute_table(&fixtures::hirzebruch(3)).unwrap().h1_total, 2);
    }

    #[test]
    fn box_source_is_flagged() {
        let t = compute_table_with(&fixtures::hirzebruch(2), DegreeSource::Box(3)).unwrap();
        assert!(!t.certified);
        assert_eq!(t.h1_total, 1);
    }

    #[test]
    fn component_cochains_of_nine_ray() {
        let fan = fixtures::nine_ray();
        let z = component_cochain(&fan, &[1, 2, 3, 4]);
        assert_eq!(z.support_len(), 10);
        let z7 = component_cochain(&fan, &[6]);
        let expected: Vec<usize> = (0..fan.num_cones()).filter(|&k| fan.max_cones()[k].contains(6)).collect();
        let got: Vec<usize> = z7.entries().map(|(t, _)| t[0]).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn basis_and_warnings() {
        let fan = fixtures::nine_ray();
        let b = first_order_basis(&fan, 0, &d(&[-1, 0, 0])).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].coefficients, vec![-BigRational::one(), BigRational::one()]);
        assert!(!b[0].is_trivial());
        assert!(first_order_basis(&fan, 1, &d(&[-1, 0, 0])).unwrap().is_empty());
        let single = component_classes(&fan, 0, &d(&[-1, -1, 0])).unwrap();
        assert_eq!(single.len(), 1);
        assert!(single[0].is_trivial());
    }

    #[test]
    fn off_slice_class_is_rejected() {
        let fan = fixtures::nine_ray();
        assert!(FirstOrderClass::component(&fan, 0, &d(&[0, 0, 0]), 0).is_err());
    }
}
