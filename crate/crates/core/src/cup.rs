//! Cup product of first-order classes and the obstruction scan.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cochain::CechCochain;
use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan};
use crate::graded::{self, FirstOrderClass, GradedTable};
use crate::support::SupportComplex;

/// Which summand of `H^2(X, T_X)_{u+u'}` can receive the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CupSelection {
    /// The product vanishes for degree reasons.
    Zero,
    /// `ρ(u') = ρ'(u) = 0`: the product vanishes.
    BothZero,
    /// The product lives in `H^1(K_{ray, u+u'})`.
    Target { ray: usize },
}

pub fn cup_degree_rule(
    fan: &Fan,
    ray: usize,
    u: &DegreeVector,
    ray2: usize,
    u2: &DegreeVector,
) -> Result<CupSelection> {
    let minus_one = BigInt::from(-1);
    if fan.pairing(ray, u)? != minus_one || fan.pairing(ray2, u2)? != minus_one {
        return Err(Error::Contract("both degrees must pair to -1 with their rays".into()));
    }
    if ray == ray2 {
        return Ok(CupSelection::Zero);
    }
    let a = fan.pairing(ray, u2)?.is_zero();
    let b = fan.pairing(ray2, u)?.is_zero();
    Ok(match (a, b) {
        (true, true) => CupSelection::BothZero,
        (true, false) => CupSelection::Target { ray },
        (false, true) => CupSelection::Target { ray: ray2 },
        (false, false) => CupSelection::Zero,
    })
}

/// `g_{στ} = c (f_σ f'_τ - f_τ f'_σ)` on the covering pairs of `k`.
pub fn product_cocycle(k: &SupportComplex, c: &BigRational, f: &CechCochain, f2: &CechCochain) -> CechCochain {
    let mut g = CechCochain::new(1);
    if c.is_zero() {
        return g;
    }
    for t in k.closed_cover_complex().tuples(1) {
        let (s, r) = (t[0], t[1]);
        let v = f.get(&[s]) * f2.get(&[r]) - f.get(&[r]) * f2.get(&[s]);
        g.set(t, c * v);
    }
    g
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassTag {
    pub ray: usize,
    pub u: DegreeVector,
    pub components: Vec<Vec<usize>>,
    pub coefficients: Vec<String>,
}

impl From<&FirstOrderClass> for ClassTag {
    fn from(c: &FirstOrderClass) -> Self {
        Self {
            ray: c.ray,
            u: c.u.clone(),
            components: c.components.clone(),
            coefficients: c.coefficients.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CupTarget {
    pub ray: usize,
    pub u: DegreeVector,
    /// `dim H^1(K_{ray,u})`
    pub dimension: usize,
    /// The scalar in front of the product cocycle.
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CupClassReport {
    pub first: ClassTag,
    pub second: ClassTag,
    pub selection: CupSelection,
    pub target: Option<CupTarget>,
    pub g: Option<CechCochain>,
    pub vanishes: bool,
    pub primitive: Option<CechCochain>,
}

/// Represents the cup product of two first-order classes by a one-cocycle on
/// the closed cover of `K_{target, u+u'}` and decides whether it vanishes.
pub fn cup_cocycle(fan: &Fan, a: &FirstOrderClass, b: &FirstOrderClass) -> Result<CupClassReport> {
    let selection = cup_degree_rule(fan, a.ray, &a.u, b.ray, &b.u)?;
    let mut report = CupClassReport {
        first: a.into(),
        second: b.into(),
        selection,
        target: None,
        g: None,
        vanishes: true,
        primitive: None,
    };
    let CupSelection::Target { ray } = selection else {
        return Ok(report);
    };
    // Orient so that `first` carries the target ray; the product is
    // symmetric under exchanging the two inputs.
    let (p, q) = if ray == a.ray { (a, b) } else { (b, a) };
    let w = p.u.add(&q.u);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let c = BigRational::from_integer(fan.pairing(q.ray, &p.u)?) * half;
    let k = SupportComplex::build(fan, ray, &w)?;
    let g = product_cocycle(&k, &c, &p.cochain(fan), &q.cochain(fan));
    let primitive = k.closed_cover_complex().is_coboundary(&g)?;
    report.target = Some(CupTarget {
        ray,
        u: w,
        dimension: k.simplicial_h1_dim(),
        coefficient: c.to_string(),
    });
    report.vanishes = primitive.is_some();
    report.primitive = primitive;
    report.g = Some(g);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionScan {
    /// Basis pairs examined with a nonzero target.
    pub pairs_checked: usize,
    /// Products that do not vanish.
    pub obstructions: Vec<CupClassReport>,
}

impl ObstructionScan {
    pub fn obstructed(&self) -> bool {
        !self.obstructions.is_empty()
    }
}

/// Cup products of all pairs of basis classes from the table, keeping the
/// nonvanishing ones.
pub fn obstruction_scan(fan: &Fan) -> Result<ObstructionScan> {
    let table = graded::compute_table(fan)?;
    obstruction_scan_table(fan, &table)
}

pub fn obstruction_scan_table(fan: &Fan, table: &GradedTable) -> Result<ObstructionScan> {
    let entries: Vec<_> = table.h1_entries().collect();
    let bases: Vec<Vec<FirstOrderClass>> = entries
        .iter()
        .map(|e| graded::first_order_basis(fan, e.ray, &e.u))
        .collect::<Result<_>>()?;
    let mut scan = ObstructionScan {
        pairs_checked: 0,
        obstructions: Vec::new(),
    };
    for i in 0..entries.len() {
        for j in i..entries.len() {
            let sel = cup_degree_rule(fan, entries[i].ray, &entries[i].u, entries[j].ray, &entries[j].u)?;
            if !matches!(sel, CupSelection::Target { .. }) {
                continue;
            }
            for a in &bases[i] {
                for b in &bases[j] {
                    scan.pairs_checked += 1;
                    let r = cup_cocycle(fan, a, b)?;
                    if !r.vanishes {
                        scan.obstructions.push(r);
                    }
                }
            }
        }
    }
    Ok(scan)
}
