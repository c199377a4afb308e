//! Runs the combinatorial route, the Čech oracle and the cycle certificates
//! side by side and records every disagreement.

use num_traits::Zero;
use serde::Serialize;

use crate::certificate;
use crate::cup::{self, CupSelection};
use crate::degree_scan;
use crate::error::Result;
use crate::fan::{DegreeVector, Fan};
use crate::graded::{self, FirstOrderClass};
use crate::oracle::{self, ProductInput};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionMismatch {
    pub ray: usize,
    pub u: DegreeVector,
    pub p: usize,
    pub combinatorial: usize,
    pub oracle: usize,
}

/// Compares `h1`, `h2` against `dim Ȟ^1`, `dim Ȟ^2` of `O(D_ρ)` at every
/// candidate degree of every ray. Returns the number of probes and the
/// mismatches.
pub fn dimension_agreement(fan: &Fan) -> Result<(usize, Vec<DimensionMismatch>)> {
    let mut probes = 0;
    let mut bad = Vec::new();
    for ray in 0..fan.num_rays() {
        for c in degree_scan::candidate_degrees(fan, ray)? {
            let e = graded::entry(fan, ray, &c.u)?;
            let cx = oracle::DivisorCechComplex::build(fan, ray, &c.u, 3)?;
            for (p, comb) in [(1, e.h1), (2, e.h2)] {
                probes += 1;
                let o = cx.cohomology_dim(p);
                if o != comb {
                    bad.push(DimensionMismatch {
                        ray,
                        u: c.u.clone(),
                        p,
                        combinatorial: comb,
                        oracle: o,
                    });
                }
            }
        }
    }
    Ok((probes, bad))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductProbe {
    pub ray: usize,
    pub u: DegreeVector,
    pub component: Vec<usize>,
    pub ray2: usize,
    pub u2: DegreeVector,
    pub component2: Vec<usize>,
    pub selection: CupSelection,
    pub cup_vanishes: bool,
    /// `None` when both rays coincide.
    pub kappa_vanishes: Option<bool>,
    pub certificate_vanishes: bool,
    pub theta_consistent: bool,
    pub kappa_regular_and_closed: bool,
}

impl ProductProbe {
    pub fn agrees(&self) -> bool {
        self.kappa_vanishes.is_none_or(|k| k == self.cup_vanishes)
            && self.certificate_vanishes == self.cup_vanishes
            && self.theta_consistent
            && self.kappa_regular_and_closed
    }

    /// Both cross pairings nonzero and distinct rays.
    pub fn in_zero_rule(&self) -> bool {
        self.ray != self.ray2 && self.selection == CupSelection::Zero
    }
}

fn probe(fan: &Fan, a: &FirstOrderClass, b: &FirstOrderClass) -> Result<ProductProbe> {
    let report = cup::cup_cocycle(fan, a, b)?;
    let certificate_vanishes = certificate::nonzero_certificates(fan, a, b)?.is_empty();
    let (f, f2) = (a.cochain(fan), b.cochain(fan));
    let x = ProductInput {
        f: &f,
        ray: a.ray,
        u: &a.u,
        f2: &f2,
        ray2: b.ray,
        u2: &b.u,
    };
    let theta = oracle::theta_direct(fan, &x)?;
    let mut theta_consistent = theta == oracle::theta_composed(fan, &x)?
        && theta.coboundary_on(oracle::all_tuples(fan, 3).iter().map(Vec::as_slice)).is_zero();
    let (kappa_vanishes, kappa_ok) = if a.ray == b.ray {
        theta_consistent &= theta.is_zero();
        (None, true)
    } else {
        let pair = oracle::kappa_pair(fan, &x)?;
        theta_consistent &= pair.to_derivations(a.ray, b.ray, &a.u.add(&b.u)) == theta;
        let v = oracle::kappa_route(fan, &x)?;
        (Some(v.vanishes), v.regular && v.closed)
    };
    Ok(ProductProbe {
        ray: a.ray,
        u: a.u.clone(),
        component: a.components[single(a)].clone(),
        ray2: b.ray,
        u2: b.u.clone(),
        component2: b.components[single(b)].clone(),
        selection: report.selection,
        cup_vanishes: report.vanishes,
        kappa_vanishes,
        certificate_vanishes,
        theta_consistent,
        kappa_regular_and_closed: kappa_ok,
    })
}

fn single(c: &FirstOrderClass) -> usize {
    c.coefficients.iter().position(|x| !x.is_zero()).unwrap_or(0)
}

/// Products of component classes `f(Z) ∪ f(Z')` over all pairs of degrees
/// with `H^1 ≠ 0`.
pub fn product_agreement(fan: &Fan) -> Result<Vec<ProductProbe>> {
    let table = graded::compute_table(fan)?;
    let entries: Vec<_> = table.h1_entries().collect();
    let classes: Vec<Vec<FirstOrderClass>> = entries
        .iter()
        .map(|e| graded::component_classes(fan, e.ray, &e.u))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for i in 0..entries.len() {
        for j in i..entries.len() {
            for a in &classes[i] {
                for b in &classes[j] {
                    out.push(probe(fan, a, b)?);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanAgreement {
    pub rays: usize,
    pub cones: usize,
    pub dimension_probes: usize,
    pub dimension_mismatches: Vec<DimensionMismatch>,
    pub product_probes: usize,
    pub kappa_probes: usize,
    pub zero_rule_probes: usize,
    /// Zero-rule products whose κ-route class does not vanish.
    pub zero_rule_failures: usize,
    pub product_mismatches: Vec<ProductProbe>,
}

impl FanAgreement {
    pub fn passed(&self) -> bool {
        self.dimension_mismatches.is_empty() && self.product_mismatches.is_empty() && self.zero_rule_failures == 0
    }
}

pub fn check_fan(fan: &Fan) -> Result<FanAgreement> {
    let (dimension_probes, dimension_mismatches) = dimension_agreement(fan)?;
    let probes = product_agreement(fan)?;
    Ok(FanAgreement {
        rays: fan.num_rays(),
        cones: fan.num_cones(),
        dimension_probes,
        dimension_mismatches,
        product_probes: probes.len(),
        kappa_probes: probes.iter().filter(|p| p.kappa_vanishes.is_some()).count(),
        zero_rule_probes: probes.iter().filter(|p| p.in_zero_rule()).count(),
        zero_rule_failures: probes
            .iter()
            .filter(|p| p.in_zero_rule() && p.kappa_vanishes != Some(true))
            .count(),
        product_mismatches: probes.into_iter().filter(|p| !p.agrees()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn nine_ray_agrees() {
        let a = check_fan(&fixtures::nine_ray()).unwrap();
        assert!(a.passed(), "{a:?}");
        assert!(a.kappa_probes > 0);
        assert!(a.product_probes > a.kappa_probes);
    }

    #[test]
    fn hirzebruch_agrees() {
        for k in 0..=3 {
            assert!(check_fan(&fixtures::hirzebruch(k)).unwrap().passed());
        }
    }
}
