//! Finite enumeration of the degrees that can carry cohomology.
//!
//! For a fixed ray ρ only degrees on the affine slice `ρ(u) = -1` matter, and
//! the support complex at `(ρ, u)` depends on `u` only through the sign of
//! `ε(u)` for every ray ε. The slice is therefore cut into the faces of the
//! hyperplane arrangement `{ε = 0}`. If a face is unbounded, moving along a
//! lattice recession direction keeps every sign and hence the complex, so a
//! nonzero graded piece would repeat infinitely often; a complete variety has
//! finite-dimensional cohomology, so such faces contribute nothing. The
//! candidates are the lattice points of the bounded faces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::Result;
use crate::fan::{DegreeVector, Fan};
use crate::linalg::bareiss;
use crate::polyhedron::{self, Constraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed>(x: &T) -> Sign {
        if x.is_negative() {
            Sign::Negative
        } else if x.is_zero() {
            Sign::Zero
        } else {
            Sign::Positive
        }
    }

    /// Face order: a face with signs `self` lies in the closure of a face
    /// with signs `other`.
    fn below(self, other: Sign) -> bool {
        self == Sign::Zero || self == other
    }
}

/// One relatively open face of the arrangement on the slice `ρ(u) = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignFace {
    pub id: usize,
    pub ray: usize,
    /// Sign of `ε(u)` for every ray ε, indexed by ray (ρ itself is always
    /// negative on the slice).
    pub ray_signs: Vec<Sign>,
    pub dimension: usize,
    pub bounded: bool,
    #[serde(skip)]
    pub witness: Option<Vec<BigRational>>,
}

impl SignFace {
    pub fn contains_signs(&self, signs: &[Sign]) -> bool {
        signs.iter().zip(&self.ray_signs).all(|(a, b)| a.below(*b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCandidate {
    pub ray: usize,
    pub u: DegreeVector,
    /// Bounded face containing `u`; `None` for degrees from a manual box.
    pub face: Option<usize>,
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn ray_row(fan: &Fan, ray: usize) -> Vec<BigRational> {
    fan.ray(ray).to_rational()
}

/// Signs of every ray evaluated at a rational point.
pub fn sign_vector(fan: &Fan, point: &[BigRational]) -> Vec<Sign> {
    fan.rays()
        .iter()
        .map(|r| {
            let v: BigRational = r
                .coords()
                .iter()
                .zip(point)
                .fold(BigRational::zero(), |acc, (a, x)| acc + rat(a) * x);
            Sign::of(&v)
        })
        .collect()
}

pub fn degree_signs(fan: &Fan, u: &DegreeVector) -> Vec<Sign> {
    sign_vector(fan, &u.to_rational())
}

fn sign_constraint(row: Vec<BigRational>, sign: Sign) -> Constraint {
    let zero = BigRational::zero();
    match sign {
        Sign::Negative => Constraint::lt(row, zero),
        Sign::Zero => Constraint::eq(row, zero),
        Sign::Positive => Constraint::gt(row, zero),
    }
}

/// All nonempty faces of the arrangement cut out by the rays on the slice
/// `ρ(u) = -1`, found by splitting on one ray at a time and pruning
/// infeasible sign patterns.
pub fn enumerate_faces(fan: &Fan, ray: usize) -> Result<Vec<SignFace>> {
    fan.pairing(ray, &DegreeVector::zero(fan.rank()))?;
    let n = fan.rank();
    let slice = Constraint::eq(ray_row(fan, ray), -BigRational::one());
    let Some(start) = polyhedron::find_point(n, std::slice::from_ref(&slice)) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    let mut constraints = vec![slice];
    let mut signs = Vec::with_capacity(fan.num_rays());
    split(fan, ray, &mut constraints, &mut signs, start, &mut out);
    for (id, face) in out.iter_mut().enumerate() {
        face.id = id;
    }
    Ok(out)
}

fn split(
    fan: &Fan,
    ray: usize,
    constraints: &mut Vec<Constraint>,
    signs: &mut Vec<Sign>,
    witness: Vec<BigRational>,
    out: &mut Vec<SignFace>,
) {
    let n = fan.rank();
    let next = signs.len();
    if next == fan.num_rays() {
        let zero_rows: Vec<Vec<BigInt>> = std::iter::once(ray)
            .chain((0..fan.num_rays()).filter(|&e| e != ray && signs[e] == Sign::Zero))
            .map(|e| fan.ray(e).coords().to_vec())
            .collect();
        let dimension = n - bareiss::rank(zero_rows);
        out.push(SignFace {
            id: 0,
            ray,
            ray_signs: signs.clone(),
            dimension,
            bounded: recession_trivial(fan, ray, signs),
            witness: Some(witness),
        });
        return;
    }
    if next == ray {
        signs.push(Sign::Negative);
        split(fan, ray, constraints, signs, witness, out);
        signs.pop();
        return;
    }
    let current = sign_vector(fan, &witness)[next];
    for s in [Sign::Negative, Sign::Zero, Sign::Positive] {
        constraints.push(sign_constraint(ray_row(fan, next), s));
        let point = if s == current {
            Some(witness.clone())
        } else {
            polyhedron::find_point(n, constraints)
        };
        if let Some(p) = point {
            signs.push(s);
            split(fan, ray, constraints, signs, p, out);
            signs.pop();
        }
        constraints.pop();
    }
}

/// Whether the recession cone of the closure of the face with the given signs
/// is `{0}`: no nonzero `v` with `ρ(v) = 0` and `ε(v)` weakly of the face's
/// sign for every ε.
pub fn recession_trivial(fan: &Fan, ray: usize, signs: &[Sign]) -> bool {
    let n = fan.rank();
    let mut functionals = vec![fan.ray(ray).coords().to_vec()];
    let mut cs = vec![Constraint::eq(ray_row(fan, ray), BigRational::zero())];
    let mut norm = vec![BigRational::zero(); n];
    for (e, &s) in signs.iter().enumerate() {
        if e == ray {
            continue;
        }
        functionals.push(fan.ray(e).coords().to_vec());
        let row = ray_row(fan, e);
        match s {
            Sign::Zero => cs.push(Constraint::eq(row, BigRational::zero())),
            Sign::Negative => {
                for (acc, c) in norm.iter_mut().zip(&row) {
                    *acc -= c;
                }
                cs.push(Constraint::le(row, BigRational::zero()));
            }
            Sign::Positive => {
                for (acc, c) in norm.iter_mut().zip(&row) {
                    *acc += c;
                }
                cs.push(Constraint::ge(row, BigRational::zero()));
            }
        }
    }
    if bareiss::rank(functionals) < n {
        return false;
    }
    cs.push(Constraint::eq(norm, BigRational::one()));
    !polyhedron::is_feasible(n, &cs)
}

/// Lattice points of the bounded faces for ray `ray`, sorted by degree.
pub fn candidate_degrees(fan: &Fan, ray: usize) -> Result<Vec<DegreeCandidate>> {
    let faces = enumerate_faces(fan, ray)?;
    Ok(candidates_from_faces(fan, ray, &faces))
}

pub fn candidates_from_faces(fan: &Fan, ray: usize, faces: &[SignFace]) -> Vec<DegreeCandidate> {
    let n = fan.rank();
    let bounded: BTreeMap<&[Sign], usize> = faces
        .iter()
        .filter(|f| f.bounded)
        .map(|f| (f.ray_signs.as_slice(), f.id))
        .collect();
    let vertices: Vec<&SignFace> = faces.iter().filter(|f| f.dimension == 0).collect();
    let mut found: BTreeMap<DegreeVector, usize> = BTreeMap::new();
    for face in faces.iter().filter(|f| f.bounded) {
        let corners: Vec<&Vec<BigRational>> = vertices
            .iter()
            .filter(|v| face.contains_signs(&v.ray_signs))
            .filter_map(|v| v.witness.as_ref())
            .collect();
        if corners.is_empty() {
            continue;
        }
        let lo: Vec<BigInt> = (0..n)
            .map(|k| corners.iter().map(|p| p[k].floor().to_integer()).min().unwrap())
            .collect();
        let hi: Vec<BigInt> = (0..n)
            .map(|k| corners.iter().map(|p| p[k].ceil().to_integer()).max().unwrap())
            .collect();
        for u in slice_points_in_box(fan, ray, &lo, &hi) {
            if found.contains_key(&u) {
                continue;
            }
            let signs = degree_signs(fan, &u);
            if !face.contains_signs(&signs) {
                continue;
            }
            if let Some(&id) = bounded.get(signs.as_slice()) {
                found.insert(u, id);
            }
        }
    }
    found
        .into_iter()
        .map(|(u, id)| DegreeCandidate {
            ray,
            u,
            face: Some(id),
        })
        .collect()
}

/// Degrees `u` with `ρ(u) = -1` and `lo <= u <= hi` coordinatewise.
pub fn slice_points_in_box(fan: &Fan, ray: usize, lo: &[BigInt], hi: &[BigInt]) -> Vec<DegreeVector> {
    let r = fan.ray(ray).coords();
    let n = r.len();
    let pivot = (0..n)
        .filter(|&k| !r[k].is_zero())
        .min_by_key(|&k| r[k].abs())
        .expect("nonzero ray");
    let free: Vec<usize> = (0..n).filter(|&k| k != pivot).collect();
    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = free.iter().map(|&k| lo[k].clone()).collect();
    if free.iter().any(|&k| lo[k] > hi[k]) {
        return out;
    }
    loop {
        let partial: BigInt = free.iter().zip(&cur).map(|(&k, x)| &r[k] * x).sum();
        let num = BigInt::from(-1) - partial;
        let (q, rem) = num.div_rem(&r[pivot]);
        if rem.is_zero() && q >= lo[pivot] && q <= hi[pivot] {
            let mut u = vec![BigInt::zero(); n];
            for (&k, x) in free.iter().zip(&cur) {
                u[k] = x.clone();
            }
            u[pivot] = q;
            out.push(DegreeVector::new(u));
        }
        // odometer over the free coordinates
        let mut i = 0;
        loop {
            if i == free.len() {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= hi[free[i]] {
                break;
            }
            cur[i] = lo[free[i]].clone();
            i += 1;
        }
    }
}

/// All degrees of the slice inside `[-radius, radius]^n`. Used for manual
/// experimentation; not certified exhaustive.
pub fn box_degrees(fan: &Fan, ray: usize, radius: u32) -> Vec<DegreeCandidate> {
    let n = fan.rank();
    let lo = vec![-BigInt::from(radius); n];
    let hi = vec![BigInt::from(radius); n];
    let mut pts = slice_points_in_box(fan, ray, &lo, &hi);
    pts.sort();
    pts.into_iter()
        .map(|u| DegreeCandidate { ray, u, face: None })
        .collect()
}
