//! Exact feasibility for systems of rational linear equalities, weak and
//! strict inequalities, by Gaussian substitution followed by Fourier–Motzkin
//! elimination. A feasible system also yields a witness point.
//!
//! The systems met here have at most a handful of variables (the rank of the
//! lattice), so the doubly exponential worst case of Fourier–Motzkin does not
//! matter; redundant constraints are merged after every elimination step.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

/// `coeffs · x  (relation)  rhs`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    pub fn eq(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::new(coeffs, Relation::Eq, rhs)
    }

    pub fn le(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::new(coeffs, Relation::Le, rhs)
    }

    pub fn lt(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::new(coeffs, Relation::Lt, rhs)
    }

    /// `coeffs · x >= rhs`
    pub fn ge(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::le(negate(&coeffs), -rhs)
    }

    /// `coeffs · x > rhs`
    pub fn gt(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self::lt(negate(&coeffs), -rhs)
    }

    pub fn is_satisfied(&self, x: &[BigRational]) -> bool {
        let lhs = dot(&self.coeffs, x);
        match self.relation {
            Relation::Eq => lhs == self.rhs,
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
        }
    }
}

fn negate(v: &[BigRational]) -> Vec<BigRational> {
    v.iter().map(|c| -c).collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(c, _)| !c.is_zero())
        .fold(BigRational::zero(), |acc, (c, x)| acc + c * x)
}

/// `x_var = coeffs · x + constant`, with `coeffs[var] = 0`.
struct Substitution {
    var: usize,
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

#[derive(Clone)]
struct Ineq {
    coeffs: Vec<BigRational>,
    rhs: BigRational,
    strict: bool,
}

fn substitute(coeffs: &mut [BigRational], rhs: &mut BigRational, s: &Substitution) {
    let a = std::mem::take(&mut coeffs[s.var]);
    if a.is_zero() {
        return;
    }
    for (c, sc) in coeffs.iter_mut().zip(&s.coeffs) {
        if !sc.is_zero() {
            *c += &a * sc;
        }
    }
    *rhs -= &a * &s.constant;
}

/// Merges duplicate directions (after positive normalization) keeping the
/// tightest bound, and checks constant rows. Returns `None` if a constant
/// row is violated.
fn normalize(ineqs: Vec<Ineq>) -> Option<Vec<Ineq>> {
    let mut best: BTreeMap<Vec<BigRational>, (BigRational, bool)> = BTreeMap::new();
    for mut q in ineqs {
        let Some(lead) = q.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
            let ok = if q.strict {
                q.rhs.is_positive()
            } else {
                !q.rhs.is_negative()
            };
            if !ok {
                return None;
            }
            continue;
        };
        if !lead.is_one() {
            for c in q.coeffs.iter_mut() {
                *c /= &lead;
            }
            q.rhs /= &lead;
        }
        match best.get_mut(&q.coeffs) {
            Some((rhs, strict)) => {
                if q.rhs < *rhs {
                    *rhs = q.rhs;
                    *strict = q.strict;
                } else if q.rhs == *rhs {
                    *strict |= q.strict;
                }
            }
            None => {
                best.insert(q.coeffs, (q.rhs, q.strict));
            }
        }
    }
    Some(
        best.into_iter()
            .map(|(coeffs, (rhs, strict))| Ineq {
                coeffs,
                rhs,
                strict,
            })
            .collect(),
    )
}

/// Returns a point satisfying every constraint, or `None` if the system is
/// infeasible. Each constraint must have exactly `dim` coefficients.
pub fn find_point(dim: usize, constraints: &[Constraint]) -> Option<Vec<BigRational>> {
    let mut subs: Vec<Substitution> = Vec::new();
    let mut ineqs: Vec<Ineq> = Vec::new();

    for c in constraints {
        assert_eq!(c.coeffs.len(), dim, "constraint dimension");
        if c.relation != Relation::Eq {
            ineqs.push(Ineq {
                coeffs: c.coeffs.clone(),
                rhs: c.rhs.clone(),
                strict: c.relation == Relation::Lt,
            });
        }
    }
    for c in constraints.iter().filter(|c| c.relation == Relation::Eq) {
        let mut coeffs = c.coeffs.clone();
        let mut rhs = c.rhs.clone();
        for s in &subs {
            substitute(&mut coeffs, &mut rhs, s);
        }
        let Some(var) = coeffs.iter().position(|v| !v.is_zero()) else {
            if rhs.is_zero() {
                continue;
            }
            return None;
        };
        let a = coeffs[var].clone();
        let sub = Substitution {
            var,
            coeffs: coeffs
                .iter()
                .enumerate()
                .map(|(k, v)| if k == var { BigRational::zero() } else { -v / &a })
                .collect(),
            constant: rhs / &a,
        };
        for q in ineqs.iter_mut() {
            substitute(&mut q.coeffs, &mut q.rhs, &sub);
        }
        subs.push(sub);
    }

    let mut current = normalize(ineqs)?;
    // For each eliminated variable, the constraints that bounded it.
    let mut stages: Vec<(usize, Vec<Ineq>)> = Vec::new();
    for var in 0..dim {
        let (involved, rest): (Vec<Ineq>, Vec<Ineq>) =
            current.into_iter().partition(|q| !q.coeffs[var].is_zero());
        let mut next = rest;
        let (upper, lower): (Vec<&Ineq>, Vec<&Ineq>) =
            involved.iter().partition(|q| q.coeffs[var].is_positive());
        for u in &upper {
            for l in &lower {
                let su = u.coeffs[var].clone();
                let sl = -l.coeffs[var].clone();
                let coeffs = u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(a, b)| a * &sl + b * &su)
                    .collect();
                next.push(Ineq {
                    coeffs,
                    rhs: &u.rhs * &sl + &l.rhs * &su,
                    strict: u.strict || l.strict,
                });
            }
        }
        current = normalize(next)?;
        stages.push((var, involved));
    }

    let mut x = vec![BigRational::zero(); dim];
    for (var, bounds) in stages.iter().rev() {
        let mut lo: Option<(BigRational, bool)> = None;
        let mut hi: Option<(BigRational, bool)> = None;
        for q in bounds {
            let a = &q.coeffs[*var];
            let rest: BigRational = q
                .coeffs
                .iter()
                .enumerate()
                .filter(|(k, c)| k != var && !c.is_zero())
                .fold(BigRational::zero(), |acc, (k, c)| acc + c * &x[k]);
            let bound = (&q.rhs - rest) / a;
            if a.is_positive() {
                hi = Some(match hi {
                    Some((b, s)) if b < bound => (b, s),
                    Some((b, s)) if b == bound => (b, s || q.strict),
                    _ => (bound, q.strict),
                });
            } else {
                lo = Some(match lo {
                    Some((b, s)) if b > bound => (b, s),
                    Some((b, s)) if b == bound => (b, s || q.strict),
                    _ => (bound, q.strict),
                });
            }
        }
        x[*var] = match (lo, hi) {
            (Some((l, ls)), Some((h, hs))) => {
                if l < h {
                    (l + h) / BigRational::from_integer(2.into())
                } else if l == h && !ls && !hs {
                    l
                } else {
                    // Fourier–Motzkin guarantees consistency of the projection.
                    unreachable!("inconsistent bounds after elimination")
                }
            }
            (Some((l, _)), None) => l + BigRational::one(),
            (None, Some((h, _))) => h - BigRational::one(),
            (None, None) => BigRational::zero(),
        };
    }
    for s in subs.iter().rev() {
        let v = dot(&s.coeffs, &x) + &s.constant;
        x[s.var] = v;
    }
    debug_assert!(constraints.iter().all(|c| c.is_satisfied(&x)));
    Some(x)
}

pub fn is_feasible(dim: usize, constraints: &[Constraint]) -> bool {
    find_point(dim, constraints).is_some()
}
