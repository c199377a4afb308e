//! Σ-reduced cycles in `K_{ρ,w}` and the pairing `Z *_α Z'` that certifies a
//! nonvanishing cup product.
//!
//! A cycle is Σ-reduced when no two of its edges lie in a common cone of the
//! fan. Then every edge `E_i` has a maximal cone `σ_i` meeting the cycle in
//! exactly `E_i`, and a one-cocycle on the cover of `K` pulls back to the
//! cycle as `Σ_i g_{σ_i σ_{i+1}}`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cochain::CechCochain;
use crate::cup::{self, CupSelection};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::graded::FirstOrderClass;
use crate::linalg::bareiss;
use crate::support::SupportComplex;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedCycle {
    /// Vertices in cyclic order; edge `i` joins `vertices[i]` and
    /// `vertices[i+1]` (indices mod the length).
    pub vertices: Vec<usize>,
    /// `sigma_choice[i]`: least maximal cone meeting the cycle in edge `i`.
    pub sigma_choice: Vec<usize>,
    /// True when the order is opposite to the canonical one (start at the
    /// least vertex, continue to its smaller neighbour).
    pub reversed: bool,
}

fn edge(a: usize, b: usize) -> [usize; 2] {
    [a.min(b), a.max(b)]
}

fn canonical_reversed(vertices: &[usize]) -> bool {
    let k = vertices.len();
    let (i, _) = vertices.iter().enumerate().min_by_key(|(_, &v)| v).unwrap();
    vertices[(i + 1) % k] > vertices[(i + k - 1) % k]
}

/// Whether `cycle` is a simple cycle in the edge graph of `k` of length at
/// least 3.
pub fn is_simple_cycle(k: &SupportComplex, cycle: &[usize]) -> bool {
    let n = cycle.len();
    n >= 3
        && cycle.iter().collect::<BTreeSet<_>>().len() == n
        && (0..n).all(|i| k.edges.contains(&edge(cycle[i], cycle[(i + 1) % n])))
}

/// Cones meeting the cycle exactly in edge `i`.
pub fn valid_sigmas(fan: &Fan, cycle: &[usize], i: usize) -> Vec<usize> {
    let n = cycle.len();
    let (a, b) = (cycle[i], cycle[(i + 1) % n]);
    (0..fan.num_cones())
        .filter(|&s| {
            let c = &fan.max_cones()[s];
            c.contains(a) && c.contains(b) && cycle.iter().filter(|&&v| c.contains(v)).count() == 2
        })
        .collect()
}

/// First pair of edges `(i, j)`, `i < j`, lying in a common cone.
fn offending_pair(fan: &Fan, cycle: &[usize]) -> Option<(usize, usize)> {
    let n = cycle.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut rays = vec![cycle[i], cycle[(i + 1) % n], cycle[j], cycle[(j + 1) % n]];
            rays.sort();
            rays.dedup();
            if fan.in_common_cone(&rays) {
                return Some((i, j));
            }
        }
    }
    None
}

impl ReducedCycle {
    /// Checks that `vertices` form a Σ-reduced cycle of `k` and picks the
    /// least valid cone for each edge.
    pub fn new(fan: &Fan, k: &SupportComplex, vertices: Vec<usize>) -> Result<Self> {
        if !is_simple_cycle(k, &vertices) {
            return Err(Error::Contract(format!("{vertices:?} is not a simple cycle of the complex")));
        }
        if let Some((i, j)) = offending_pair(fan, &vertices) {
            return Err(Error::Contract(format!("edges {i} and {j} of {vertices:?} lie in a common cone")));
        }
        let sigma_choice = (0..vertices.len())
            .map(|i| {
                valid_sigmas(fan, &vertices, i)
                    .first()
                    .copied()
                    .ok_or_else(|| Error::Contract(format!("no cone meets {vertices:?} in edge {i} alone")))
            })
            .collect::<Result<_>>()?;
        let reversed = canonical_reversed(&vertices);
        Ok(Self {
            vertices,
            sigma_choice,
            reversed,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<[usize; 2]> {
        let n = self.len();
        (0..n).map(|i| [self.vertices[i], self.vertices[(i + 1) % n]]).collect()
    }

    /// The same cycle traversed the other way. Edge `i` of the result is
    /// edge `n-1-i` of `self`.
    pub fn reverse(&self) -> Self {
        let n = self.len();
        let mut vertices: Vec<usize> = self.vertices.iter().rev().copied().collect();
        vertices.rotate_right(1);
        let sigma_choice = (0..n).map(|i| self.sigma_choice[n - 1 - i]).collect();
        Self {
            vertices,
            sigma_choice,
            reversed: !self.reversed,
        }
    }

    /// Oriented edge chain as a vector over the edges of `k`.
    pub fn chain(&self, k: &SupportComplex) -> Vec<BigRational> {
        chain_of(k, &self.vertices)
    }
}

fn chain_of(k: &SupportComplex, cycle: &[usize]) -> Vec<BigRational> {
    let n = cycle.len();
    let mut c = vec![BigRational::zero(); k.edges.len()];
    for i in 0..n {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        let idx = k.edges.iter().position(|&e| e == edge(a, b)).expect("edge of complex");
        if a < b {
            c[idx] += BigRational::one();
        } else {
            c[idx] -= BigRational::one();
        }
    }
    c
}

/// Boundary matrix of the triangles: rows are edges, columns triangles.
fn boundary2(k: &SupportComplex) -> Vec<Vec<BigInt>> {
    let mut m = vec![vec![BigInt::zero(); k.triangles.len()]; k.edges.len()];
    let idx = |e: [usize; 2]| k.edges.iter().position(|&x| x == e).unwrap();
    for (t, &[a, b, c]) in k.triangles.iter().enumerate() {
        m[idx([b, c])][t] += 1;
        m[idx([a, c])][t] -= 1;
        m[idx([a, b])][t] += 1;
    }
    m
}

/// Whether an edge chain bounds in `k`.
pub fn is_boundary(k: &SupportComplex, chain: &[BigRational]) -> bool {
    bareiss::solve(&boundary2(k), k.triangles.len(), chain).is_some()
}

/// Splits a simple cycle into Σ-reduced cycles whose classes sum to its
/// class, discarding pieces that bound.
pub fn reduce_cycle(fan: &Fan, k: &SupportComplex, cycle: &[usize]) -> Vec<ReducedCycle> {
    let mut out = Vec::new();
    reduce_into(fan, k, cycle.to_vec(), &mut out);
    out
}

fn reduce_into(fan: &Fan, k: &SupportComplex, cycle: Vec<usize>, out: &mut Vec<ReducedCycle>) {
    let n = cycle.len();
    if n < 3 {
        return;
    }
    match offending_pair(fan, &cycle) {
        None => {
            if !is_boundary(k, &chain_of(k, &cycle)) {
                if let Ok(c) = ReducedCycle::new(fan, k, cycle) {
                    out.push(c);
                }
            }
        }
        Some((i, j)) if j == i + 1 || (i == 0 && j == n - 1) => {
            // adjacent edges: drop the shared vertex
            let shared = if j == i + 1 { (i + 1) % n } else { 0 };
            let mut next = cycle;
            next.remove(shared);
            reduce_into(fan, k, next, out);
        }
        Some((i, j)) => {
            // disjoint edges [a,b] = E_i and [c,d] = E_j: split along [b,c]
            // and [d,a], both inside the common cone
            let first: Vec<usize> = cycle[i + 1..=j].to_vec();
            let mut second: Vec<usize> = cycle[j + 1..].to_vec();
            second.extend_from_slice(&cycle[..=i]);
            reduce_into(fan, k, first, out);
            reduce_into(fan, k, second, out);
        }
    }
}

/// Fundamental cycles of a spanning forest of the edge graph, one per
/// non-tree edge.
pub fn fundamental_cycles(k: &SupportComplex) -> Vec<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = k.vertices.iter().map(|&v| (v, Vec::new())).collect();
    for &[a, b] in &k.edges {
        adj.get_mut(&a).unwrap().push(b);
        adj.get_mut(&b).unwrap().push(a);
    }
    let mut parent: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
    let mut tree = BTreeSet::new();
    for &root in &k.vertices {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        depth.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(w) {
                    e.insert(Some(v));
                    depth.insert(w, depth[&v] + 1);
                    tree.insert(edge(v, w));
                    queue.push_back(w);
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for &[a, b] in &k.edges {
        if tree.contains(&[a, b]) {
            continue;
        }
        // walk both endpoints up to their common ancestor
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while x != y {
            if depth[&x] >= depth[&y] {
                x = parent[&x].unwrap();
                left.push(x);
            } else {
                y = parent[&y].unwrap();
                right.push(y);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        cycles.push(left);
    }
    cycles
}

/// Σ-reduced cycles whose classes form a basis of `H_1(K; Q)`.
pub fn find_reduced_cycles(fan: &Fan, k: &SupportComplex) -> Vec<ReducedCycle> {
    let boundaries: Vec<Vec<BigInt>> = k
        .triangles
        .iter()
        .map(|&[a, b, c]| {
            chain_of(k, &[a, b, c])
                .into_iter()
                .map(|q| q.to_integer())
                .collect()
        })
        .collect();
    let base_rank = bareiss::rank(boundaries.clone());
    let mut rows = boundaries;
    let mut chosen = Vec::new();
    for beta in fundamental_cycles(k) {
        for alpha in reduce_cycle(fan, k, &beta) {
            let row: Vec<BigInt> = alpha.chain(k).into_iter().map(|q| q.to_integer()).collect();
            rows.push(row);
            if bareiss::rank(rows.clone()) == base_rank + chosen.len() + 1 {
                chosen.push(alpha);
            } else {
                rows.pop();
            }
        }
    }
    chosen
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelevantIndex {
    pub i: usize,
    pub b: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingResult {
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
    pub relevant: Vec<RelevantIndex>,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(q)
}

/// Edges whose chosen cone meets `component`.
fn alpha_of(fan: &Fan, alpha: &ReducedCycle, component: &[usize]) -> Vec<bool> {
    alpha
        .sigma_choice
        .iter()
        .map(|&s| component.iter().any(|&r| fan.max_cones()[s].contains(r)))
        .collect()
}

/// `Z *_α Z'` with scalar `coefficient = ρ'(u)/2`, where `Z` is a component
/// of `Γ_{ρ,u}` for the target ray ρ and `Z'` one of `Γ_{ρ',u'}`.
pub fn pairing(fan: &Fan, alpha: &ReducedCycle, z: &[usize], z2: &[usize], coefficient: &BigRational) -> PairingResult {
    let a = alpha_of(fan, alpha, z);
    let b = alpha_of(fan, alpha, z2);
    let n = alpha.len();
    let mut relevant = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let sa = (a[i], a[j]);
        let sb = (b[i], b[j]);
        let nonempty = |s: (bool, bool)| s.0 || s.1;
        if sa != sb && nonempty(sa) && nonempty(sb) && (sa.0 || sb.0) && (sa.1 || sb.1) {
            let bi = if a[i] && b[j] { 1 } else { -1 };
            relevant.push(RelevantIndex { i, b: bi });
        }
    }
    let sum: i64 = relevant.iter().map(|r| i64::from(r.b)).sum();
    PairingResult {
        value: coefficient * BigRational::from_integer(sum.into()),
        relevant,
    }
}

/// `Σ_i g_{σ_i σ_{i+1}}`: the pullback of a one-cocycle on the cover of
/// `K` to the cycle, as a multiple of the fundamental class.
pub fn pullback_check(g: &CechCochain, alpha: &ReducedCycle) -> BigRational {
    let n = alpha.len();
    (0..n)
        .map(|i| g.get(&[alpha.sigma_choice[i], alpha.sigma_choice[(i + 1) % n]]))
        .fold(BigRational::zero(), |acc, v| acc + v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingTerm {
    pub z: Vec<usize>,
    pub z2: Vec<usize>,
    #[serde(serialize_with = "ser_rational")]
    pub weight: BigRational,
    pub result: PairingResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub target_ray: usize,
    pub target_u: crate::fan::DegreeVector,
    pub alpha: ReducedCycle,
    pub terms: Vec<PairingTerm>,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

/// Pairings of two first-order classes against every basis cycle of the
/// target complex. The product vanishes iff every value is zero.
pub fn certificates(fan: &Fan, a: &FirstOrderClass, b: &FirstOrderClass) -> Result<Vec<Certificate>> {
    let CupSelection::Target { ray } = cup::cup_degree_rule(fan, a.ray, &a.u, b.ray, &b.u)? else {
        return Ok(Vec::new());
    };
    let (p, q) = if ray == a.ray { (a, b) } else { (b, a) };
    let w = p.u.add(&q.u);
    let coefficient = BigRational::new(fan.pairing(q.ray, &p.u)?, BigInt::from(2));
    let k = SupportComplex::build(fan, ray, &w)?;
    let mut out = Vec::new();
    for alpha in find_reduced_cycles(fan, &k) {
        let mut terms = Vec::new();
        let mut value = BigRational::zero();
        for (z, cz) in p.components.iter().zip(&p.coefficients) {
            for (z2, cz2) in q.components.iter().zip(&q.coefficients) {
                let weight = cz * cz2;
                if weight.is_zero() {
                    continue;
                }
                let result = pairing(fan, &alpha, z, z2, &coefficient);
                value += &weight * &result.value;
                if !result.relevant.is_empty() {
                    terms.push(PairingTerm {
                        z: z.clone(),
                        z2: z2.clone(),
                        weight,
                        result,
                    });
                }
            }
        }
        out.push(Certificate {
            target_ray: ray,
            target_u: w.clone(),
            alpha,
            terms,
            value,
        });
    }
    Ok(out)
}

/// Certificates with nonzero value.
pub fn nonzero_certificates(fan: &Fan, a: &FirstOrderClass, b: &FirstOrderClass) -> Result<Vec<Certificate>> {
    Ok(certificates(fan, a, b)?.into_iter().filter(|c| !c.value.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::DegreeVector;
    use crate::fixtures;

    fn d(xs: &[i64]) -> DegreeVector {
        DegreeVector::from_i64(xs)
    }

    fn hexagon() -> (Fan, SupportComplex) {
        let fan = fixtures::nine_ray();
        let k = SupportComplex::build(&fan, 0, &d(&[-1, -1, 0])).unwrap();
        (fan, k)
    }

    #[test]
    fn hexagon_is_its_own_reduced_cycle() {
        let (fan, k) = hexagon();
        let cycles = find_reduced_cycles(&fan, &k);
        assert_eq!(cycles.len(), 1);
        let mut vs = cycles[0].vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![1, 2, 3, 5, 6, 7]);
        let direct = reduce_cycle(&fan, &k, &[7, 2, 3, 1, 6, 5]);
        assert_eq!(direct.len(), 1);
        assert_eq!(direct[0].vertices, vec![7, 2, 3, 1, 6, 5]);
    }

    #[test]
    fn pictured_cycle_pairing() {
        let (fan, k) = hexagon();
        let alpha = ReducedCycle::new(&fan, &k, vec![7, 2, 3, 1, 6, 5]).unwrap();
        let c = BigRational::new((-1).into(), 2.into());
        let r = pairing(&fan, &alpha, &[1, 2, 3, 4], &[6], &c);
        assert_eq!(r.relevant.len(), 2);
        assert_eq!(r.value.numer().magnitude(), &1u32.into());
        assert_eq!(r.value.denom(), &BigInt::one());
        let rev = pairing(&fan, &alpha.reverse(), &[1, 2, 3, 4], &[6], &c);
        assert_eq!(rev.value, -r.value.clone());
    }

    #[test]
    fn pullback_matches_pairing() {
        let fan = fixtures::nine_ray();
        let a = FirstOrderClass::component(&fan, 0, &d(&[-1, 0, 0]), 0).unwrap();
        let b = FirstOrderClass::component(&fan, 5, &d(&[0, -1, 0]), 0).unwrap();
        let report = cup::cup_cocycle(&fan, &a, &b).unwrap();
        let g = report.g.unwrap();
        let certs = certificates(&fan, &a, &b).unwrap();
        assert_eq!(certs.len(), 1);
        assert_eq!(pullback_check(&g, &certs[0].alpha), certs[0].value);
        assert!(pullback_check(&CechCochain::new(1), &certs[0].alpha).is_zero());
    }

    #[test]
    fn trivial_pairings() {
        let (fan, k) = hexagon();
        let alpha = ReducedCycle::new(&fan, &k, vec![7, 2, 3, 1, 6, 5]).unwrap();
        let c = BigRational::one();
        let outside = (0..fan.num_rays())
            .find(|&r| alpha.sigma_choice.iter().all(|&s| !fan.max_cones()[s].contains(r)))
            .unwrap();
        let r = pairing(&fan, &alpha, &[outside], &[6], &c);
        assert!(r.relevant.is_empty());
        assert!(r.value.is_zero());
        assert!(pairing(&fan, &alpha, &[6], &[6], &c).relevant.is_empty());
    }

    #[test]
    fn non_reduced_cycles_are_rejected() {
        let fan = fixtures::projective_space(3);
        let k = SupportComplex::build(&fan, 3, &d(&[-1, -1, -1])).unwrap();
        assert!(ReducedCycle::new(&fan, &k, vec![0, 1, 2]).is_err());
        assert!(reduce_cycle(&fan, &k, &[0, 1, 2]).is_empty());
        assert!(find_reduced_cycles(&fan, &k).is_empty());
    }

    #[test]
    fn sigma_choice_does_not_matter() {
        let (fan, k) = hexagon();
        let alpha = ReducedCycle::new(&fan, &k, vec![7, 2, 3, 1, 6, 5]).unwrap();
        let c = BigRational::new((-1).into(), 2.into());
        let base = pairing(&fan, &alpha, &[1, 2, 3, 4], &[6], &c).value;
        let options: Vec<Vec<usize>> = (0..alpha.len()).map(|i| valid_sigmas(&fan, &alpha.vertices, i)).collect();
        let mut idx = vec![0usize; options.len()];
        loop {
            let mut alt = alpha.clone();
            alt.sigma_choice = idx.iter().zip(&options).map(|(&j, o)| o[j]).collect();
            assert_eq!(pairing(&fan, &alt, &[1, 2, 3, 4], &[6], &c).value, base);
            let mut p = 0;
            loop {
                if p == idx.len() {
                    return;
                }
                idx[p] += 1;
                if idx[p] < options[p].len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }
}
