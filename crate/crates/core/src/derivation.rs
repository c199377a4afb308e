//! Torus-homogeneous derivations `∂(ρ, w)` acting on Laurent polynomials by
//! `∂(ρ, w)(χ^v) = ρ(v) χ^{w+v}`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cochain;
use crate::error::Result;
use crate::fan::{DegreeVector, Fan};

/// Rational combination of characters `χ^v`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<DegreeVector, BigRational>,
}

impl Laurent {
    pub fn monomial(v: DegreeVector) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(v, BigRational::one());
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DegreeVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, v: DegreeVector, c: BigRational) {
        let e = self.terms.entry(v).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.push(v.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.push(v.clone(), -c);
        }
        out
    }
}

/// Rational combination of symbols `∂(ρ, w)`, kept sorted with no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct Derivation {
    terms: BTreeMap<(usize, DegreeVector), BigRational>,
}

impl Derivation {
    pub fn symbol(ray: usize, w: DegreeVector) -> Self {
        Self::symbol_scaled(ray, w, BigRational::one())
    }

    pub fn symbol_scaled(ray: usize, w: DegreeVector, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((ray, w), c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, DegreeVector), &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, ray: usize, w: &DegreeVector) -> BigRational {
        self.terms
            .get(&(ray, w.clone()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn push(&mut self, key: (usize, DegreeVector), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn apply(&self, fan: &Fan, f: &Laurent) -> Result<Laurent> {
        let mut out = Laurent::default();
        for ((ray, w), c) in &self.terms {
            for (v, a) in &f.terms {
                let rv = BigRational::from_integer(fan.pairing(*ray, v)?);
                out.push(w.add(v), c * a * rv);
            }
        }
        Ok(out)
    }

    /// Lie bracket, extended bilinearly from
    /// `[∂(ρ,u), ∂(ρ',u')] = ρ(u') ∂(ρ',u+u') - ρ'(u) ∂(ρ,u+u')`.
    pub fn bracket(fan: &Fan, a: &Derivation, b: &Derivation) -> Result<Derivation> {
        let mut out = Derivation::default();
        for ((r, u), c) in &a.terms {
            for ((r2, u2), c2) in &b.terms {
                let w = u.add(u2);
                let cc = c * c2;
                let r_u2 = BigRational::from_integer(fan.pairing(*r, u2)?);
                let r2_u = BigRational::from_integer(fan.pairing(*r2, u)?);
                out.push((*r2, w.clone()), &cc * r_u2);
                out.push((*r, w), -(cc * r2_u));
            }
        }
        Ok(out)
    }
}

impl cochain::Coefficient for Derivation {
    fn zero() -> Self {
        Self::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.push(k.clone(), c.clone());
        }
        out
    }

    fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::default();
        for (k, v) in &self.terms {
            out.push(k.clone(), v * c);
        }
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((r, w), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*d({r},{w})")?;
        }
        Ok(())
    }
}
