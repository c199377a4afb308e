//! Brute-force verification layer.
//!
//! Graded Čech cohomology of `O(D_ρ)` over the affine cover by maximal cones,
//! computed directly from section membership with the sparse rational
//! eliminator. Nothing here goes through the support complexes, so agreement
//! with the combinatorial route is a genuine cross-check.

use std::cell::OnceCell;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::cochain::{coboundary_entry, normalize_tuple, CechCochain, Cochain, Coefficient};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan};
use crate::linalg::{SparseEliminator, SparseRow};

fn rzero() -> BigRational {
    <BigRational as Coefficient>::zero()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All sorted tuples of `p+1` distinct maximal cones.
pub fn all_tuples(fan: &Fan, p: usize) -> Vec<Vec<usize>> {
    combinations(fan.num_cones(), p + 1)
}

/// Degree-`u` slice of the alternating Čech complex of `O(D_ρ)`: the tuples
/// on whose common chart `χ^u` is a section.
#[derive(Debug, Clone)]
pub struct DivisorCechComplex {
    pub ray: usize,
    pub u: DegreeVector,
    tuples: Vec<Vec<Vec<usize>>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
    ranks: Vec<OnceCell<usize>>,
}

fn enumerate_admissible(
    masks: &[Vec<u64>],
    bad: &[u64],
    common: &[u64],
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<Vec<usize>>>,
) {
    if cur.len() == out.len() {
        return;
    }
    for k in start..masks.len() {
        let next: Vec<u64> = common.iter().zip(&masks[k]).map(|(a, b)| a & b).collect();
        cur.push(k);
        if next.iter().zip(bad).all(|(a, b)| a & b == 0) {
            out[cur.len() - 1].push(cur.clone());
        }
        enumerate_admissible(masks, bad, &next, k + 1, cur, out);
        cur.pop();
    }
}

impl DivisorCechComplex {
    /// Cochain spaces in degrees `0..=max_p`.
    pub fn build(fan: &Fan, ray: usize, u: &DegreeVector, max_p: usize) -> Result<Self> {
        // Membership on a cone is decided ray by ray, so a tuple is
        // admissible iff its common rays avoid the rays failing on their own.
        let words = fan.num_rays().div_ceil(64);
        let mut bad = vec![0u64; words];
        for r in 0..fan.num_rays() {
            if !fan.section_membership(ray, u, &[r])? {
                bad[r / 64] |= 1 << (r % 64);
            }
        }
        let masks: Vec<Vec<u64>> = fan
            .max_cones()
            .iter()
            .map(|c| {
                let mut m = vec![0u64; words];
                for &r in c.rays() {
                    m[r / 64] |= 1 << (r % 64);
                }
                m
            })
            .collect();
        let mut tuples = vec![Vec::new(); max_p + 1];
        let mut cur = Vec::new();
        let full = vec![u64::MAX; words];
        enumerate_admissible(&masks, &bad, &full, 0, &mut cur, &mut tuples);
        for ts in &mut tuples {
            ts.sort();
        }
        let index = tuples
            .iter()
            .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
            .collect();
        Ok(Self {
            ray,
            u: u.clone(),
            ranks: vec![OnceCell::new(); max_p],
            tuples,
            index,
        })
    }

    pub fn max_degree(&self) -> usize {
        self.tuples.len() - 1
    }

    pub fn tuples(&self, p: usize) -> &[Vec<usize>] {
        &self.tuples[p]
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.index
            .get(t.len().wrapping_sub(1))
            .is_some_and(|m| m.contains_key(t))
    }

    /// Row of `d^p` at a tuple of degree `p+1`.
    fn row(&self, t: &[usize]) -> SparseRow {
        let p = t.len() - 2;
        let mut row: SparseRow = Vec::new();
        for k in 0..t.len() {
            let face: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
            if let Some(&c) = self.index[p].get(&face) {
                let s = if k % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                row.push((c, s));
            }
        }
        row.sort_by_key(|e| e.0);
        row
    }

    /// Rank of `d^p : C^p -> C^{p+1}`.
    pub fn rank_d(&self, p: usize) -> usize {
        assert!(p < self.max_degree(), "complex built only to degree {}", self.max_degree());
        *self.ranks[p].get_or_init(|| {
            // Feeding rows in reverse lexicographic order keeps fill-in low.
            let mut e = SparseEliminator::new();
            for t in self.tuples[p + 1].iter().rev() {
                e.insert(self.row(t), rzero());
            }
            e.rank()
        })
    }

    /// `dim Ȟ^p`; needs the complex built to degree `p+1`.
    pub fn cohomology_dim(&self, p: usize) -> usize {
        let below = if p == 0 { 0 } else { self.rank_d(p - 1) };
        self.tuples[p].len() - self.rank_d(p) - below
    }

    /// Keeps the entries on tuples of this complex.
    pub fn restrict(&self, x: &CechCochain) -> CechCochain {
        let mut out = CechCochain::new(x.degree());
        for (t, v) in x.entries() {
            if self.contains(t) {
                out.set(t, v.clone());
            }
        }
        out
    }

    /// `d x`, for `x` supported on this complex.
    pub fn apply(&self, x: &CechCochain) -> CechCochain {
        let p = x.degree();
        assert!(p < self.max_degree());
        let mut out = CechCochain::new(p + 1);
        for t in &self.tuples[p + 1] {
            out.set(t, coboundary_entry(t, |f| if self.contains(f) { x.get(f) } else { rzero() }));
        }
        out
    }

    /// Whether `d x = 0`, for `x` supported on this complex.
    pub fn is_cocycle(&self, x: &CechCochain) -> bool {
        let p = x.degree();
        assert!(p < self.max_degree());
        self.tuples[p + 1]
            .iter()
            .all(|t| Coefficient::is_zero(&coboundary_entry(t, |f| if self.contains(f) { x.get(f) } else { rzero() })))
    }

    /// Whether `x = d y` for some cochain `y` one degree lower.
    pub fn is_coboundary(&self, x: &CechCochain) -> Result<bool> {
        let p = x.degree();
        if p == 0 || p > self.max_degree() {
            return Err(Error::Contract(format!("cannot test degree {p} cochains")));
        }
        if x.entries().any(|(t, _)| !self.contains(t)) {
            return Err(Error::Contract("cochain has values on non-admissible tuples".into()));
        }
        let mut e = SparseEliminator::new();
        for t in self.tuples[p].iter().rev() {
            e.insert(self.row(t), x.get(t));
            if !e.is_consistent() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `dim Ȟ^p(U, O(D_ρ))_u` for `p <= 2`.
pub fn divisor_cohomology_dim(fan: &Fan, ray: usize, u: &DegreeVector, p: usize) -> Result<usize> {
    if p > 2 {
        return Err(Error::Unsupported(format!("cohomological degree {p}")));
    }
    Ok(DivisorCechComplex::build(fan, ray, u, p + 1)?.cohomology_dim(p))
}

/// Singular Čech cochain: values on all ordered tuples, repetitions allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularCochain<T: Coefficient> {
    pub degree: usize,
    values: BTreeMap<Vec<usize>, T>,
}

impl<T: Coefficient> SingularCochain<T> {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn get(&self, t: &[usize]) -> T {
        self.values.get(t).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, t: &[usize], v: T) {
        assert_eq!(t.len(), self.degree + 1);
        if v.is_zero() {
            self.values.remove(t);
        } else {
            self.values.insert(t.to_vec(), v);
        }
    }

    /// An alternating cochain viewed as a singular one on `0..n`.
    pub fn from_alternating(a: &Cochain<T>, n: usize) -> Self {
        let mut s = Self::new(a.degree());
        for t in ordered_tuples(n, a.degree() + 1) {
            s.set(&t, a.get(&t));
        }
        s
    }

    /// Singular differential on `0..n`.
    pub fn coboundary(&self, n: usize) -> Self {
        let mut out = Self::new(self.degree + 1);
        for t in ordered_tuples(n, self.degree + 2) {
            out.set(&t, coboundary_entry(&t, |f| self.get(f)));
        }
        out
    }
}

/// All ordered tuples of length `len` over `0..n`, repetitions allowed.
pub fn ordered_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    let mut out = Vec::new();
    for p in ordered_tuples(k, k) {
        let mut q = p.clone();
        if let Some(negative) = normalize_tuple(&mut q) {
            out.push((p, negative));
        }
    }
    out
}

/// `φ^p(f)_{i_0..i_p} = 1/(p+1)! Σ_π sign(π) f_{i_π(0)..i_π(p)}` on sorted
/// tuples of distinct indices in `0..n`.
pub fn phi_antisymmetrize<T: Coefficient>(f: &SingularCochain<T>, n: usize) -> Result<Cochain<T>> {
    let p = f.degree;
    if p > 2 {
        return Err(Error::Unsupported(format!("antisymmetrization in degree {p}")));
    }
    let perms = permutations(p + 1);
    let fact = BigRational::from_integer(BigInt::from(perms.len()));
    let mut out = Cochain::new(p);
    for t in combinations(n, p + 1) {
        let mut acc = T::zero();
        for (perm, negative) in &perms {
            let pt: Vec<usize> = perm.iter().map(|&k| t[k]).collect();
            let v = f.get(&pt);
            acc = if *negative { acc.sub(&v) } else { acc.add(&v) };
        }
        out.set(&t, acc.scale(&fact.recip()));
    }
    Ok(out)
}

/// Alternating cup product of two one-cocycles valued in derivations,
/// `1/6 ([f_ij,f'_jk] + [f_ij,f'_ik] + [f_ik,f'_jk] - [f_ik,f'_ij] - [f_jk,f'_ik] - [f_jk,f'_ij])`.
pub fn alternating_cup(fan: &Fan, f: &Cochain<Derivation>, f2: &Cochain<Derivation>) -> Result<Cochain<Derivation>> {
    let sixth = BigRational::new(BigInt::one(), BigInt::from(6));
    let mut out = Cochain::new(2);
    let br = |a: &Derivation, b: &Derivation| Derivation::bracket(fan, a, b);
    for t in all_tuples(fan, 2) {
        let (i, j, k) = (t[0], t[1], t[2]);
        let terms = [
            br(&f.get(&[i, j]), &f2.get(&[j, k]))?,
            br(&f.get(&[i, j]), &f2.get(&[i, k]))?,
            br(&f.get(&[i, k]), &f2.get(&[j, k]))?,
            br(&f.get(&[i, k]), &f2.get(&[i, j]))?.neg(),
            br(&f.get(&[j, k]), &f2.get(&[i, k]))?.neg(),
            br(&f.get(&[j, k]), &f2.get(&[i, j]))?.neg(),
        ];
        let sum = terms.iter().fold(Derivation::zero(), |acc, x| acc.add(x));
        out.set(&t, sum.scale(&sixth));
    }
    Ok(out)
}

/// Singular cup product `g̃_{ijk} = [f_ij, f'_jk]` on all ordered triples.
pub fn singular_cup(fan: &Fan, f: &Cochain<Derivation>, f2: &Cochain<Derivation>) -> Result<SingularCochain<Derivation>> {
    let n = fan.num_cones();
    let mut out = SingularCochain::new(2);
    for t in ordered_tuples(n, 3) {
        let v = Derivation::bracket(fan, &f.get(&[t[0], t[1]]), &f2.get(&[t[1], t[2]]))?;
        out.set(&t, v);
    }
    Ok(out)
}

/// `(f_τ - f_σ) ∂(ρ, u)`: a zero-cochain pushed to a one-cocycle of `T_X`.
pub fn first_order_cocycle(fan: &Fan, f: &CechCochain, ray: usize, u: &DegreeVector) -> Cochain<Derivation> {
    let mut g = Cochain::new(1);
    for t in all_tuples(fan, 1) {
        let c = f.get(&[t[1]]) - f.get(&[t[0]]);
        g.set(&t, Derivation::symbol_scaled(ray, u.clone(), c));
    }
    g
}

/// `A_{στγ} = f_σf'_τ - f_τf'_σ + f_γf'_σ - f_σf'_γ + f_τf'_γ - f_γf'_τ`.
pub fn alternating_product(f: &CechCochain, f2: &CechCochain, t: &[usize]) -> BigRational {
    let (s, r, g) = (t[0], t[1], t[2]);
    let v = |x: &CechCochain, i: usize| x.get(&[i]);
    v(f, s) * v(f2, r) - v(f, r) * v(f2, s) + v(f, g) * v(f2, s) - v(f, s) * v(f2, g) + v(f, r) * v(f2, g)
        - v(f, g) * v(f2, r)
}

/// Input data for the two-cocycle of a product of first-order classes.
#[derive(Debug, Clone)]
pub struct ProductInput<'a> {
    pub f: &'a CechCochain,
    pub ray: usize,
    pub u: &'a DegreeVector,
    pub f2: &'a CechCochain,
    pub ray2: usize,
    pub u2: &'a DegreeVector,
}

impl ProductInput<'_> {
    fn pairings(&self, fan: &Fan) -> Result<(BigRational, BigRational)> {
        Ok((
            BigRational::from_integer(fan.pairing(self.ray, self.u2)?),
            BigRational::from_integer(fan.pairing(self.ray2, self.u)?),
        ))
    }
}

/// `θ = ½ A (ρ(u') ∂(ρ',u+u') - ρ'(u) ∂(ρ,u+u'))` on all triples.
pub fn theta_direct(fan: &Fan, x: &ProductInput) -> Result<Cochain<Derivation>> {
    let (r_u2, r2_u) = x.pairings(fan)?;
    let w = x.u.add(x.u2);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let factor = Derivation::symbol_scaled(x.ray2, w.clone(), r_u2).add(&Derivation::symbol_scaled(x.ray, w, -r2_u));
    let mut out = Cochain::new(2);
    for t in all_tuples(fan, 2) {
        let a = alternating_product(x.f, x.f2, &t);
        out.set(&t, factor.scale(&(&half * a)));
    }
    Ok(out)
}

/// θ obtained by pushing both classes to one-cocycles of `T_X` and taking
/// their alternating cup product.
pub fn theta_composed(fan: &Fan, x: &ProductInput) -> Result<Cochain<Derivation>> {
    let g = first_order_cocycle(fan, x.f, x.ray, x.u);
    let g2 = first_order_cocycle(fan, x.f2, x.ray2, x.u2);
    alternating_cup(fan, &g, &g2)
}

/// Lifts of θ to the summands `O(D_ρ)` and `O(D_ρ')` in degree `u+u'`,
/// stored as the coefficient of `χ^{u+u'}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaPair {
    pub kappa: CechCochain,
    pub kappa2: CechCochain,
}

pub fn kappa_pair(fan: &Fan, x: &ProductInput) -> Result<KappaPair> {
    let (r_u2, r2_u) = x.pairings(fan)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut kappa = CechCochain::new(2);
    let mut kappa2 = CechCochain::new(2);
    for t in all_tuples(fan, 2) {
        let a = alternating_product(x.f, x.f2, &t);
        kappa.set(&t, &half * &r2_u * &a);
        kappa2.set(&t, &half * &r_u2 * &a);
    }
    Ok(KappaPair { kappa, kappa2 })
}

impl KappaPair {
    /// `κ' - κ` with each coefficient turned back into its derivation.
    pub fn to_derivations(&self, ray: usize, ray2: usize, w: &DegreeVector) -> Cochain<Derivation> {
        let mut out = Cochain::new(2);
        let keys: std::collections::BTreeSet<Vec<usize>> = self
            .kappa
            .entries()
            .chain(self.kappa2.entries())
            .map(|(t, _)| t.to_vec())
            .collect();
        for t in keys {
            let d = Derivation::symbol_scaled(ray2, w.clone(), self.kappa2.get(&t))
                .add(&Derivation::symbol_scaled(ray, w.clone(), -self.kappa.get(&t)));
            out.set(&t, d);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KappaVerdict {
    /// Every nonzero entry is a section on its chart.
    pub regular: bool,
    /// Both lifts are two-cocycles.
    pub closed: bool,
    pub kappa_class_zero: bool,
    pub kappa2_class_zero: bool,
    pub vanishes: bool,
}

fn audit(fan: &Fan, ray: usize, w: &DegreeVector, x: &CechCochain) -> Result<bool> {
    for (t, _) in x.entries() {
        if !fan.section_membership(ray, w, fan.intersection(t).rays())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decides vanishing of the product through the lifts κ, κ': the class is
/// zero iff both are coboundaries in their divisor complexes.
pub fn kappa_route(fan: &Fan, x: &ProductInput) -> Result<KappaVerdict> {
    if x.ray == x.ray2 {
        return Err(Error::Unsupported("the lift needs two distinct rays".into()));
    }
    let w = x.u.add(x.u2);
    let pair = kappa_pair(fan, x)?;
    let regular = audit(fan, x.ray, &w, &pair.kappa)? && audit(fan, x.ray2, &w, &pair.kappa2)?;
    let c1 = DivisorCechComplex::build(fan, x.ray, &w, 3)?;
    let c2 = DivisorCechComplex::build(fan, x.ray2, &w, 3)?;
    let k1 = c1.restrict(&pair.kappa);
    let k2 = c2.restrict(&pair.kappa2);
    let closed = c1.is_cocycle(&k1) && c2.is_cocycle(&k2);
    let kappa_class_zero = c1.is_coboundary(&k1)?;
    let kappa2_class_zero = c2.is_coboundary(&k2)?;
    Ok(KappaVerdict {
        regular,
        closed,
        kappa_class_zero,
        kappa2_class_zero,
        vanishes: kappa_class_zero && kappa2_class_zero,
    })
}

pub fn kappa_route_vanishes(fan: &Fan, x: &ProductInput) -> Result<bool> {
    Ok(kappa_route(fan, x)?.vanishes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graded::component_cochain;

    fn d(xs: &[i64]) -> DegreeVector {
        DegreeVector::from_i64(xs)
    }

    fn q(n: i64, m: i64) -> BigRational {
        BigRational::new(n.into(), m.into())
    }

    #[test]
    fn nine_ray_dimensions() {
        let fan = fixtures::nine_ray();
        assert_eq!(divisor_cohomology_dim(&fan, 0, &d(&[-1, 0, 0]), 1).unwrap(), 1);
        assert_eq!(divisor_cohomology_dim(&fan, 0, &d(&[-1, -1, 0]), 2).unwrap(), 1);
        assert_eq!(divisor_cohomology_dim(&fan, 5, &d(&[0, -1, 0]), 1).unwrap(), 1);
        for ray in [0, 4, 8] {
            for p in 1..=2 {
                assert_eq!(divisor_cohomology_dim(&fan, ray, &d(&[0, 0, 0]), p).unwrap(), 0);
            }
        }
        assert!(divisor_cohomology_dim(&fan, 0, &d(&[0, 0, 0]), 3).is_err());
    }

    #[test]
    fn phi_examples() {
        let mut f = SingularCochain::<BigRational>::new(1);
        f.set(&[0, 1], q(1, 1));
        let a = phi_antisymmetrize(&f, 2).unwrap();
        assert_eq!(a.get(&[0, 1]), q(1, 2));
        assert_eq!(a.get(&[1, 0]), q(-1, 2));
        assert!(phi_antisymmetrize(&SingularCochain::<BigRational>::new(3), 5).is_err());
        let mut alt = CechCochain::new(2);
        alt.set(&[0, 1, 3], q(5, 3));
        alt.set(&[1, 2, 3], q(-2, 1));
        let back = phi_antisymmetrize(&SingularCochain::from_alternating(&alt, 4), 4).unwrap();
        assert_eq!(back, alt);
    }

    fn nine_ray_input() -> (Fan, CechCochain, CechCochain) {
        let fan = fixtures::nine_ray();
        let f = component_cochain(&fan, &[1, 2, 3, 4]);
        let f2 = component_cochain(&fan, &[6]);
        (fan, f, f2)
    }

    #[test]
    fn theta_paths_agree() {
        let (fan, f, f2) = nine_ray_input();
        let (u, u2) = (d(&[-1, 0, 0]), d(&[0, -1, 0]));
        let x = ProductInput {
            f: &f,
            ray: 0,
            u: &u,
            f2: &f2,
            ray2: 5,
            u2: &u2,
        };
        let direct = theta_direct(&fan, &x).unwrap();
        assert!(!direct.is_zero());
        assert_eq!(direct, theta_composed(&fan, &x).unwrap());
        let w = u.add(&u2);
        assert_eq!(kappa_pair(&fan, &x).unwrap().to_derivations(0, 5, &w), direct);
    }

    #[test]
    fn singular_and_alternating_cups_agree() {
        let (fan, f, f2) = nine_ray_input();
        let g = first_order_cocycle(&fan, &f, 0, &d(&[-1, 0, 0]));
        let g2 = first_order_cocycle(&fan, &f2, 5, &d(&[0, -1, 0]));
        let s = singular_cup(&fan, &g, &g2).unwrap();
        assert_eq!(phi_antisymmetrize(&s, fan.num_cones()).unwrap(), alternating_cup(&fan, &g, &g2).unwrap());
    }

    #[test]
    fn equal_inputs_give_zero_theta() {
        let (fan, f, _) = nine_ray_input();
        let u = d(&[-1, 0, 0]);
        let x = ProductInput {
            f: &f,
            ray: 0,
            u: &u,
            f2: &f,
            ray2: 0,
            u2: &u,
        };
        assert!(theta_direct(&fan, &x).unwrap().is_zero());
    }

    #[test]
    fn nine_ray_kappa_route() {
        let (fan, f, f2) = nine_ray_input();
        let (u, u2) = (d(&[-1, 0, 0]), d(&[0, -1, 0]));
        let x = ProductInput {
            f: &f,
            ray: 0,
            u: &u,
            f2: &f2,
            ray2: 5,
            u2: &u2,
        };
        let v = kappa_route(&fan, &x).unwrap();
        assert!(v.regular && v.closed);
        assert!(!v.vanishes);
        assert!(!v.kappa_class_zero);
        assert!(v.kappa2_class_zero);
        let one = CechCochain::indicator(0..fan.num_cones());
        let y = ProductInput { f: &one, ..x.clone() };
        assert!(kappa_route_vanishes(&fan, &y).unwrap());
        let z = ProductInput { ray2: 0, ..x };
        assert!(kappa_route(&fan, &z).is_err());
    }
}
