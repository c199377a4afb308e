//! Alternating Čech cochains indexed by tuples of maximal cones.
//!
//! One value is stored per strictly increasing tuple; reading a permuted tuple
//! applies the permutation sign, and tuples with a repeated index read as 0.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Values a cochain can take: rationals, or formal combinations of
/// derivations.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, c: &BigRational) -> Self;

    fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, c: &BigRational) -> Self {
        self * c
    }
}

/// Sorts `idx` in place and returns the permutation sign, or `None` if an
/// index repeats.
pub fn normalize_tuple(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    // insertion sort; tuples have at most four entries
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cochain<T: Coefficient> {
    degree: usize,
    values: BTreeMap<Vec<usize>, T>,
}

/// Rational-valued alternating cochain.
pub type CechCochain = Cochain<BigRational>;

impl<T: Coefficient> Cochain<T> {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            values: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, idx: &[usize]) -> T {
        assert_eq!(idx.len(), self.degree + 1, "cochain index length");
        let mut key = idx.to_vec();
        match normalize_tuple(&mut key) {
            None => T::zero(),
            Some(negative) => match self.values.get(&key) {
                None => T::zero(),
                Some(v) if negative => v.neg(),
                Some(v) => v.clone(),
            },
        }
    }

    /// Sets the value on `idx`; the value on every permutation follows by
    /// antisymmetry. Setting a tuple with a repeated index to a nonzero value
    /// panics.
    pub fn set(&mut self, idx: &[usize], value: T) {
        assert_eq!(idx.len(), self.degree + 1, "cochain index length");
        let mut key = idx.to_vec();
        let Some(negative) = normalize_tuple(&mut key) else {
            assert!(value.is_zero(), "alternating cochain on a degenerate tuple");
            return;
        };
        let v = if negative { value.neg() } else { value };
        if v.is_zero() {
            self.values.remove(&key);
        } else {
            self.values.insert(key, v);
        }
    }

    /// Nonzero entries on sorted tuples, in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &T)> {
        self.values.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, v) in &other.values {
            let nv = out.get(k).add(v);
            out.set(k, nv);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::new(self.degree);
        for (k, v) in &self.values {
            out.set(k, v.scale(c));
        }
        out
    }

    /// Alternating Čech differential evaluated on the given sorted tuples of
    /// length `degree + 2`: `(dx)_{i_0..i_{p+1}} = Σ_k (-1)^k x_{i_0..î_k..i_{p+1}}`.
    pub fn coboundary_on<'a, I>(&self, tuples: I) -> Cochain<T>
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let mut out = Cochain::new(self.degree + 1);
        for t in tuples {
            assert_eq!(t.len(), self.degree + 2);
            let v = coboundary_entry(t, |face| self.get(face));
            out.set(t, v);
        }
        out
    }

    pub fn map<U: Coefficient>(&self, f: impl Fn(&T) -> U) -> Cochain<U> {
        let mut out = Cochain::new(self.degree);
        for (k, v) in &self.values {
            out.set(k, f(v));
        }
        out
    }
}

/// `Σ_k (-1)^k value(t with entry k removed)`.
pub fn coboundary_entry<T: Coefficient>(t: &[usize], value: impl Fn(&[usize]) -> T) -> T {
    let mut acc = T::zero();
    let mut face = Vec::with_capacity(t.len() - 1);
    for k in 0..t.len() {
        face.clear();
        face.extend(t.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x));
        let v = value(&face);
        acc = if k % 2 == 0 { acc.add(&v) } else { acc.sub(&v) };
    }
    acc
}

impl Cochain<BigRational> {
    /// Zero-cochain equal to 1 on every listed index.
    pub fn indicator(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Self::new(0);
        for i in indices {
            c.set(&[i], BigRational::one());
        }
        c
    }
}

/// Serialized as a list of `{cones, value}` with values as exact strings.
impl<T: Coefficient + Display> Serialize for Cochain<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            cones: &'a [usize],
            value: String,
        }
        let mut seq = s.serialize_seq(Some(self.values.len()))?;
        for (k, v) in &self.values {
            seq.serialize_element(&Entry {
                cones: k,
                value: v.to_string(),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn permutation_signs() {
        let mut c = CechCochain::new(2);
        c.set(&[2, 0, 1], q(5));
        assert_eq!(c.get(&[0, 1, 2]), q(5));
        assert_eq!(c.get(&[1, 0, 2]), q(-5));
        assert_eq!(c.get(&[0, 0, 2]), q(0));
        assert_eq!(c.support_len(), 1);
    }

    #[test]
    fn zero_values_are_not_stored() {
        let mut c = CechCochain::new(1);
        c.set(&[0, 1], q(3));
        c.set(&[1, 0], q(0));
        assert!(c.is_zero());
    }

    #[test]
    fn coboundary_of_coboundary_vanishes() {
        let mut x = CechCochain::new(0);
        for (i, v) in [3, -1, 4, 1].into_iter().enumerate() {
            x.set(&[i], q(v));
        }
        let pairs: Vec<Vec<usize>> = vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]];
        let dx = x.coboundary_on(pairs.iter().map(Vec::as_slice));
        assert_eq!(dx.get(&[0, 1]), q(-4));
        let triples: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        assert!(dx.coboundary_on(triples.iter().map(Vec::as_slice)).is_zero());
    }
}
