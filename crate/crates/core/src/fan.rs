//! Lattice vectors, simplicial fans and their structural validation.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{bareiss, gcd_all};
use crate::polyhedron::{self, Constraint};

macro_rules! lattice_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Vec<BigInt>);

        impl $name {
            pub fn new(coords: Vec<BigInt>) -> Self {
                Self(coords)
            }

            pub fn from_i64(coords: &[i64]) -> Self {
                Self(coords.iter().map(|&c| BigInt::from(c)).collect())
            }

            pub fn zero(rank: usize) -> Self {
                Self(vec![BigInt::zero(); rank])
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[BigInt] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn to_rational(&self) -> Vec<BigRational> {
                self.0.iter().map(|c| BigRational::from_integer(c.clone())).collect()
            }

            /// Coordinatewise sum; panics on rank mismatch.
            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.rank(), other.rank(), "rank mismatch");
                Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn scale(&self, k: &BigInt) -> Self {
                Self(self.0.iter().map(|a| a * k).collect())
            }

            pub fn neg(&self) -> Self {
                Self(self.0.iter().map(|a| -a).collect())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_seq(self.0.iter().map(JsonInt))
            }
        }
    };
}

lattice_newtype!(
    /// A vector of the cocharacter lattice N; rays of a fan live here.
    LatticeVector
);
lattice_newtype!(
    /// A character u of the lattice M; cohomology is graded by these.
    DegreeVector
);

impl DegreeVector {
    /// Parses `"a,b,c"`.
    pub fn parse(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim().parse::<BigInt>().map_err(|e| Error::Parse {
                    line: 1,
                    column: 1,
                    message: format!("bad degree component {t:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

/// Serializes a big integer as a plain JSON number.
pub(crate) struct JsonInt<'a>(pub &'a BigInt);

impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n: serde_json::Number = self
            .0
            .to_string()
            .parse()
            .map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

/// The evaluation `⟨v, u⟩`.
pub fn dot(v: &LatticeVector, u: &DegreeVector) -> Result<BigInt> {
    if v.rank() != u.rank() {
        return Err(Error::DimensionMismatch {
            expected: v.rank(),
            found: u.rank(),
        });
    }
    Ok(v.0.iter().zip(&u.0).map(|(a, b)| a * b).sum())
}

/// A cone of the fan, given by the sorted indices of its rays.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Self(rays)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn contains_all(&self, rays: &[usize]) -> bool {
        rays.iter().all(|&r| self.contains(r))
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        Cone(self.0.iter().copied().filter(|&r| other.contains(r)).collect())
    }
}

/// Structural flags computed by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub is_simplicial: bool,
    pub is_smooth: bool,
    pub is_complete: bool,
}

/// A pure full-dimensional simplicial fan. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Fan {
    rank: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<Cone>,
    flags: ValidationReport,
    cones_of_ray: Vec<Vec<usize>>,
}

impl Fan {
    /// Checks the input structurally, runs [`validate`], and rejects anything
    /// that is not simplicial.
    pub fn new(rank: usize, rays: Vec<LatticeVector>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::UnsupportedFan("rank must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.rank() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: r.rank(),
                });
            }
            if r.is_zero() {
                return Err(Error::InvalidFan(format!("ray {i} is the zero vector")));
            }
            if !gcd_all(r.coords()).is_one() {
                return Err(Error::NonPrimitiveRay { index: i });
            }
        }
        let mut seen = BTreeMap::new();
        for (i, r) in rays.iter().enumerate() {
            if let Some(j) = seen.insert(r.clone(), i) {
                return Err(Error::InvalidFan(format!("rays {j} and {i} coincide")));
            }
        }
        let mut cones = Vec::with_capacity(max_cones.len());
        let mut cone_set = BTreeSet::new();
        for (k, c) in max_cones.into_iter().enumerate() {
            if let Some(&bad) = c.iter().find(|&&i| i >= rays.len()) {
                return Err(Error::RayIndex {
                    index: bad,
                    count: rays.len(),
                });
            }
            let n = c.len();
            let cone = Cone::new(c);
            if cone.len() != n {
                return Err(Error::InvalidFan(format!("cone {k} repeats a ray")));
            }
            if !cone_set.insert(cone.clone()) {
                return Err(Error::InvalidFan(format!("cone {k} is listed twice")));
            }
            cones.push(cone);
        }
        if cones.is_empty() {
            return Err(Error::InvalidFan("no maximal cones".into()));
        }
        let mut cones_of_ray = vec![Vec::new(); rays.len()];
        for (k, c) in cones.iter().enumerate() {
            for &r in c.rays() {
                cones_of_ray[r].push(k);
            }
        }
        if let Some(r) = cones_of_ray.iter().position(Vec::is_empty) {
            return Err(Error::InvalidFan(format!("ray {r} lies in no maximal cone")));
        }
        let flags = validate(rank, &rays, &cones)?;
        if !flags.is_simplicial {
            return Err(Error::UnsupportedFan(
                "a maximal cone has linearly dependent generators".into(),
            ));
        }
        Ok(Self {
            rank,
            rays,
            max_cones: cones,
            flags,
            cones_of_ray,
        })
    }

    pub fn from_i64(rank: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Self> {
        Self::new(
            rank,
            rays.iter().map(|r| LatticeVector::from_i64(r)).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Cone] {
        &self.max_cones
    }

    pub fn num_cones(&self) -> usize {
        self.max_cones.len()
    }

    /// Indices of the maximal cones containing `ray`.
    pub fn cones_of_ray(&self, ray: usize) -> &[usize] {
        &self.cones_of_ray[ray]
    }

    pub fn flags(&self) -> ValidationReport {
        self.flags
    }

    pub fn ensure_complete(&self) -> Result<()> {
        if self.flags.is_complete {
            Ok(())
        } else {
            Err(Error::UnsupportedFan("the fan is not complete".into()))
        }
    }

    fn check_ray(&self, index: usize) -> Result<()> {
        if index < self.rays.len() {
            Ok(())
        } else {
            Err(Error::RayIndex {
                index,
                count: self.rays.len(),
            })
        }
    }

    /// `ρ(u)`: the primitive generator of ray `ray` evaluated at `u`.
    pub fn pairing(&self, ray: usize, u: &DegreeVector) -> Result<BigInt> {
        self.check_ray(ray)?;
        dot(&self.rays[ray], u)
    }

    /// Whether `χ^u` is a section of `O(D_ρ)` over the affine chart of the
    /// cone spanned by `cone_rays`: every ray ε of the cone has `ε(u) >= 0`,
    /// except ρ itself which only needs `ρ(u) >= -1`.
    pub fn section_membership(
        &self,
        divisor_ray: usize,
        u: &DegreeVector,
        cone_rays: &[usize],
    ) -> Result<bool> {
        self.check_ray(divisor_ray)?;
        for &e in cone_rays {
            let v = self.pairing(e, u)?;
            let ok = if e == divisor_ray {
                v >= BigInt::from(-1)
            } else {
                !v.is_negative()
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The smallest cone of the fan containing all listed rays, if any.
    pub fn common_cone(&self, rays: &[usize]) -> Option<Cone> {
        if rays.iter().any(|&r| r >= self.rays.len()) {
            return None;
        }
        match rays.first() {
            None => Some(Cone::zero()),
            Some(&r0) => self.cones_of_ray[r0]
                .iter()
                .any(|&k| self.max_cones[k].contains_all(rays))
                .then(|| Cone::new(rays.to_vec())),
        }
    }

    pub fn in_common_cone(&self, rays: &[usize]) -> bool {
        self.common_cone(rays).is_some()
    }

    /// Rays shared by all listed maximal cones.
    pub fn intersection(&self, cones: &[usize]) -> Cone {
        let mut it = cones.iter();
        let Some(&first) = it.next() else {
            return Cone::zero();
        };
        let mut acc = self.max_cones[first].clone();
        for &k in it {
            acc = acc.intersect(&self.max_cones[k]);
        }
        acc
    }

    /// Parses the JSON fan format
    /// `{"rank": n, "rays": [[..],..], "max_cones": [[..],..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFan = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let rays = raw
            .rays
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|n| {
                        n.to_string().parse::<BigInt>().map_err(|_| {
                            Error::InvalidFan(format!("ray {i}: {n} is not an integer"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(LatticeVector::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.rank, rays, raw.max_cones)
    }

    /// Emits the canonical JSON layout; [`Fan::from_json`] followed by this
    /// reproduces a canonical file byte for byte.
    pub fn to_json(&self) -> String {
        let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(", ");
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"rank\": {},\n", self.rank));
        out.push_str("  \"rays\": [\n");
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| format!("    [{}]", join(&mut r.coords().iter().map(|c| c.to_string()))))
            .collect();
        out.push_str(&rays.join(",\n"));
        out.push_str("\n  ],\n  \"max_cones\": [\n");
        let cones: Vec<String> = self
            .max_cones
            .iter()
            .map(|c| format!("    [{}]", join(&mut c.rays().iter().map(|i| i.to_string()))))
            .collect();
        out.push_str(&cones.join(",\n"));
        out.push_str("\n  ]\n}\n");
        out
    }
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFan {
    rank: usize,
    rays: Vec<Vec<serde_json::Number>>,
    max_cones: Vec<Vec<usize>>,
}

fn generator_matrix(rays: &[LatticeVector], cone: &Cone) -> Vec<Vec<BigInt>> {
    cone.rays().iter().map(|&r| rays[r].coords().to_vec()).collect()
}

/// Computes the structural flags of a pure fan.
///
/// * simplicial: every maximal cone has a nonzero generator determinant;
/// * smooth: every such determinant is ±1;
/// * complete: every facet of a maximal cone is shared by exactly two maximal
///   cones, the adjacency graph of maximal cones is connected, and (checked
///   for all pairs) maximal cones meet along common faces.
///
/// A pair of cones overlapping in a non-face is an error, as is a maximal cone
/// that is not full-dimensional.
pub fn validate(rank: usize, rays: &[LatticeVector], cones: &[Cone]) -> Result<ValidationReport> {
    for (k, c) in cones.iter().enumerate() {
        if c.len() != rank {
            return Err(Error::UnsupportedFan(format!(
                "maximal cone {k} has {} rays; only full-dimensional simplicial cones are supported",
                c.len()
            )));
        }
    }
    let dets: Vec<BigInt> = cones
        .iter()
        .map(|c| bareiss::det(&generator_matrix(rays, c)))
        .collect();
    let is_simplicial = dets.iter().all(|d| !d.is_zero());
    let is_smooth = is_simplicial && dets.iter().all(|d| d.abs().is_one());
    if !is_simplicial {
        return Ok(ValidationReport {
            is_simplicial,
            is_smooth,
            is_complete: false,
        });
    }

    for i in 0..cones.len() {
        for j in (i + 1)..cones.len() {
            if !meets_in_common_face(rank, rays, &cones[i], &cones[j]) {
                return Err(Error::InvalidFan(format!(
                    "maximal cones {i} and {j} overlap outside a common face"
                )));
            }
        }
    }

    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, c) in cones.iter().enumerate() {
        for skip in 0..c.len() {
            let facet: Vec<usize> = c
                .rays()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &r)| r)
                .collect();
            facets.entry(facet).or_default().push(k);
        }
    }
    let paired = facets.values().all(|ks| ks.len() == 2);

    let mut adjacency = vec![Vec::new(); cones.len()];
    for ks in facets.values().filter(|ks| ks.len() == 2) {
        adjacency[ks[0]].push(ks[1]);
        adjacency[ks[1]].push(ks[0]);
    }
    let mut seen = vec![false; cones.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(k) = queue.pop_front() {
        for &l in &adjacency[k] {
            if !seen[l] {
                seen[l] = true;
                queue.push_back(l);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);

    Ok(ValidationReport {
        is_simplicial,
        is_smooth,
        is_complete: paired && connected,
    })
}

/// Whether two simplicial full-dimensional cones intersect exactly in the
/// face spanned by their common rays. Decided by an exact feasibility check:
/// a point `Σ a_i s_i = Σ b_j t_j` with `a, b >= 0` and positive weight on a
/// non-shared generator of the first cone witnesses a bad overlap.
fn meets_in_common_face(rank: usize, rays: &[LatticeVector], s: &Cone, t: &Cone) -> bool {
    let ns = s.len();
    let nt = t.len();
    let dim = ns + nt;
    let zero = BigRational::zero;
    let mut cs = Vec::new();
    for coord in 0..rank {
        let mut row = vec![zero(); dim];
        for (i, &r) in s.rays().iter().enumerate() {
            row[i] = BigRational::from_integer(rays[r].coords()[coord].clone());
        }
        for (j, &r) in t.rays().iter().enumerate() {
            row[ns + j] = -BigRational::from_integer(rays[r].coords()[coord].clone());
        }
        cs.push(Constraint::eq(row, zero()));
    }
    for v in 0..dim {
        let mut row = vec![zero(); dim];
        row[v] = BigRational::one();
        cs.push(Constraint::ge(row, zero()));
    }
    let mut norm = vec![zero(); dim];
    let mut any = false;
    for (i, &r) in s.rays().iter().enumerate() {
        if !t.contains(r) {
            norm[i] = BigRational::one();
            any = true;
        }
    }
    if !any {
        return true;
    }
    cs.push(Constraint::eq(norm, BigRational::one()));
    !polyhedron::is_feasible(dim, &cs)
}
