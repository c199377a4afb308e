//! The simplicial complex `V_{ρ,u}` on the rays negative against `u`, its one-
//! and two-skeleta, and its closed cover by maximal cones.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cochain::{coboundary_entry, CechCochain, Coefficient};
use crate::error::{Error, Result};
use crate::fan::{DegreeVector, Fan};
use crate::linalg::bareiss;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportComplex {
    pub ray: usize,
    pub u: DegreeVector,
    /// Ray indices, sorted.
    pub vertices: Vec<usize>,
    /// Sorted pairs of vertices spanning a cone of the fan.
    pub edges: Vec<[usize; 2]>,
    /// Sorted triples of vertices spanning a cone of the fan.
    pub triangles: Vec<[usize; 3]>,
    /// `cover[σ]` is the vertex set of the piece `V_σ`, for every maximal cone.
    pub cover: Vec<Vec<usize>>,
}

/// Whether ray `e` is a vertex of `V_{ρ,u}` given `ε(u)`.
pub fn vertex_rule(is_divisor_ray: bool, value: &BigInt) -> bool {
    if is_divisor_ray {
        *value < BigInt::from(-1)
    } else {
        *value < BigInt::zero()
    }
}

impl SupportComplex {
    pub fn build(fan: &Fan, ray: usize, u: &DegreeVector) -> Result<Self> {
        let mut vertices = Vec::new();
        for e in 0..fan.num_rays() {
            if vertex_rule(e == ray, &fan.pairing(e, u)?) {
                vertices.push(e);
            }
        }
        let mut edges = Vec::new();
        let mut triangles = Vec::new();
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if !fan.in_common_cone(&[a, b]) {
                    continue;
                }
                edges.push([a, b]);
                for &c in &vertices[j + 1..] {
                    if fan.in_common_cone(&[a, b, c]) {
                        triangles.push([a, b, c]);
                    }
                }
            }
        }
        let cover = fan
            .max_cones()
            .iter()
            .map(|c| c.rays().iter().copied().filter(|r| vertices.binary_search(r).is_ok()).collect())
            .collect();
        Ok(Self {
            ray,
            u: u.clone(),
            vertices,
            edges,
            triangles,
            cover,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices shared by all listed cover pieces.
    pub fn common_vertices(&self, cones: &[usize]) -> Vec<usize> {
        let Some((&first, rest)) = cones.split_first() else {
            return self.vertices.clone();
        };
        self.cover[first]
            .iter()
            .copied()
            .filter(|v| rest.iter().all(|&k| self.cover[k].contains(v)))
            .collect()
    }

    pub fn pieces_meet(&self, cones: &[usize]) -> bool {
        !self.common_vertices(cones).is_empty()
    }

    /// Connected components of the one-skeleton.
    pub fn components(&self) -> ComponentLabeling {
        let index: BTreeMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for [a, b] in &self.edges {
            let ra = find(&mut parent, index[a]);
            let rb = find(&mut parent, index[b]);
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            by_root.entry(find(&mut parent, i)).or_default().push(v);
        }
        // roots are the least index of each class, so components come out
        // ordered by their least vertex
        let components: Vec<Vec<usize>> = by_root.into_values().collect();
        let mut component_of_vertex = BTreeMap::new();
        for (id, comp) in components.iter().enumerate() {
            for &v in comp {
                component_of_vertex.insert(v, id);
            }
        }
        ComponentLabeling {
            component_of_vertex,
            components,
        }
    }

    /// `dim H̃^0` of the one-skeleton; 0 for the empty complex.
    pub fn reduced_h0_dim(&self) -> usize {
        self.components().count().saturating_sub(1)
    }

    /// `dim H^1(K_{ρ,u}; Q)` from the simplicial cochain complex of the
    /// two-skeleton.
    pub fn simplicial_h1_dim(&self) -> usize {
        let vindex: BTreeMap<usize, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let eindex: BTreeMap<[usize; 2], usize> = self.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let d0: Vec<Vec<BigInt>> = self
            .edges
            .iter()
            .map(|[a, b]| {
                let mut row = vec![BigInt::zero(); self.vertices.len()];
                row[vindex[a]] = -BigInt::one();
                row[vindex[b]] = BigInt::one();
                row
            })
            .collect();
        let d1: Vec<Vec<BigInt>> = self
            .triangles
            .iter()
            .map(|&[a, b, c]| {
                let mut row = vec![BigInt::zero(); self.edges.len()];
                row[eindex[&[b, c]]] += 1;
                row[eindex[&[a, c]]] -= 1;
                row[eindex[&[a, b]]] += 1;
                row
            })
            .collect();
        self.edges.len() - bareiss::rank(d1) - bareiss::rank(d0)
    }

    /// Alternating Čech complex of the constant sheaf for the closed cover by
    /// the pieces `V_σ`.
    pub fn closed_cover_complex(&self) -> ScalarCechComplex {
        let n = self.cover.len();
        let singles: Vec<Vec<usize>> = (0..n).filter(|&s| self.pieces_meet(&[s])).map(|s| vec![s]).collect();
        let mut pairs = Vec::new();
        let mut triples = Vec::new();
        for (i, s) in singles.iter().enumerate() {
            for t in &singles[i + 1..] {
                let pair = [s[0], t[0]];
                if !self.pieces_meet(&pair) {
                    continue;
                }
                pairs.push(pair.to_vec());
                for g in (t[0] + 1)..n {
                    let triple = [s[0], t[0], g];
                    if self.pieces_meet(&triple) {
                        triples.push(triple.to_vec());
                    }
                }
            }
        }
        ScalarCechComplex::new([singles, pairs, triples])
    }

    pub fn debug_json(&self, fan: &Fan) -> serde_json::Value {
        let cover: Vec<serde_json::Value> = self
            .cover
            .iter()
            .enumerate()
            .map(|(k, piece)| {
                serde_json::json!({
                    "cone": k,
                    "rays": fan.max_cones()[k].rays(),
                    "vertices": piece,
                })
            })
            .collect();
        serde_json::json!({
            "ray": self.ray,
            "u": self.u,
            "vertices": self.vertices,
            "edges": self.edges,
            "triangles": self.triangles,
            "cover": cover,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentLabeling {
    pub component_of_vertex: BTreeMap<usize, usize>,
    /// Vertex lists, each sorted, ordered by least vertex.
    pub components: Vec<Vec<usize>>,
}

impl ComponentLabeling {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// Alternating Čech complex with coefficients in `Q` on a fixed set of index
/// tuples in degrees 0, 1, 2 (downward closed).
#[derive(Debug, Clone)]
pub struct ScalarCechComplex {
    tuples: [Vec<Vec<usize>>; 3],
    index: [BTreeMap<Vec<usize>, usize>; 3],
}

impl ScalarCechComplex {
    pub fn new(tuples: [Vec<Vec<usize>>; 3]) -> Self {
        let index = tuples
            .clone()
            .map(|ts| ts.into_iter().enumerate().map(|(i, t)| (t, i)).collect());
        Self { tuples, index }
    }

    pub fn tuples(&self, p: usize) -> &[Vec<usize>] {
        &self.tuples[p]
    }

    pub fn contains(&self, t: &[usize]) -> bool {
        self.index.get(t.len().wrapping_sub(1)).is_some_and(|m| m.contains_key(t))
    }

    /// Matrix of `d^p` (rows: degree `p+1` tuples, columns: degree `p`).
    pub fn differential(&self, p: usize) -> Vec<Vec<BigInt>> {
        assert!(p < 2, "differentials d^0 and d^1 only");
        let cols = self.tuples[p].len();
        self.tuples[p + 1]
            .iter()
            .map(|t| {
                let mut row = vec![BigInt::zero(); cols];
                for k in 0..t.len() {
                    let face: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
                    let c = self.index[p][&face];
                    row[c] += if k % 2 == 0 { 1 } else { -1 };
                }
                row
            })
            .collect()
    }

    pub fn h0_dim(&self) -> usize {
        self.tuples[0].len() - bareiss::rank(self.differential(0))
    }

    pub fn h1_dim(&self) -> usize {
        self.tuples[1].len() - bareiss::rank(self.differential(1)) - bareiss::rank(self.differential(0))
    }

    /// Applies the differential to a cochain of degree 0 or 1.
    pub fn apply(&self, x: &CechCochain) -> CechCochain {
        let p = x.degree();
        assert!(p < 2);
        x.coboundary_on(self.tuples[p + 1].iter().map(Vec::as_slice))
    }

    /// Whether `g` is supported on tuples of this complex.
    pub fn supports(&self, g: &CechCochain) -> bool {
        g.entries().all(|(t, _)| self.contains(t))
    }

    /// Decides whether a one-cocycle is a coboundary by an exact solve of
    /// `d^0 x = g`. Returns a primitive when it is. Fails if `g` is not a
    /// cocycle supported on this complex.
    pub fn is_coboundary(&self, g: &CechCochain) -> Result<Option<CechCochain>> {
        if g.degree() != 1 {
            return Err(Error::Contract(format!("expected a one-cochain, got degree {}", g.degree())));
        }
        if !self.supports(g) {
            return Err(Error::Contract("cochain has values outside the cover nerve".into()));
        }
        for t in &self.tuples[2] {
            if !Coefficient::is_zero(&coboundary_entry(t, |f| g.get(f))) {
                return Err(Error::Contract(format!("not a cocycle: d(g) is nonzero on {t:?}")));
            }
        }
        let d0 = self.differential(0);
        let rhs: Vec<BigRational> = self.tuples[1].iter().map(|t| g.get(t)).collect();
        let Some(x) = bareiss::solve(&d0, self.tuples[0].len(), &rhs) else {
            return Ok(None);
        };
        let mut prim = CechCochain::new(0);
        for (t, v) in self.tuples[0].iter().zip(x) {
            prim.set(t, v);
        }
        Ok(Some(prim))
    }
}
