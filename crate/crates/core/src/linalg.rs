//! Exact linear algebra over the integers and rationals.
//!
//! Two independent engines live here:
//!
//! * [`bareiss`]: dense fraction-free elimination on big-integer matrices. The
//!   combinatorial route (support complexes, cup-product cocycles) uses it.
//! * [`SparseEliminator`]: incremental sparse Gaussian elimination over the
//!   rationals. The brute-force Čech oracle uses it, so the two routes never
//!   share a rank computation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub mod bareiss {
    use super::*;

    /// Reduces `m` in place to a fraction-free row echelon form and returns
    /// the pivot column of each nonzero row, in order.
    ///
    /// Every entry below a pivot is cleared; entries of later rows are the
    /// usual Bareiss minors, so each division is exact.
    pub fn echelon(m: &mut [Vec<BigInt>]) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut prev = BigInt::one();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let (top, rest) = m.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pivot = pivot_row[c].clone();
            for row in rest.iter_mut() {
                let factor = std::mem::take(&mut row[c]);
                for j in (c + 1)..cols {
                    let t = &pivot * &row[j] - &factor * &pivot_row[j];
                    row[j] = if prev.is_one() { t } else { t / &prev };
                }
            }
            prev = pivot;
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Rank of an integer matrix given as rows.
    pub fn rank(mut m: Vec<Vec<BigInt>>) -> usize {
        echelon(&mut m).len()
    }

    /// Determinant of a square integer matrix.
    pub fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = m.to_vec();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let t = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = t / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Solves `a x = b` exactly. `a` has `cols` columns. Free variables are set
    /// to zero. Returns `None` when the system is inconsistent.
    pub fn solve(a: &[Vec<BigInt>], cols: usize, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(a.len(), b.len(), "right-hand side length");
        let denom = b
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut aug: Vec<Vec<BigInt>> = a
            .iter()
            .zip(b)
            .map(|(row, q)| {
                debug_assert_eq!(row.len(), cols);
                let mut r = row.clone();
                r.push(q.numer() * (&denom / q.denom()));
                r
            })
            .collect();
        let pivots = echelon(&mut aug);
        if pivots.last() == Some(&cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); cols];
        for (k, &p) in pivots.iter().enumerate().rev() {
            let row = &aug[k];
            let mut acc = BigRational::from_integer(row[cols].clone());
            for j in (p + 1)..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= &x[j] * BigRational::from_integer(row[j].clone());
                }
            }
            x[p] = acc / BigRational::from_integer(row[p].clone());
        }
        let d = BigRational::from_integer(denom);
        for v in &mut x {
            *v /= &d;
        }
        Some(x)
    }
}

/// Sparse row: strictly increasing column indices with nonzero values.
pub type SparseRow = Vec<(usize, BigRational)>;

/// Outcome of inserting one equation into a [`SparseEliminator`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inserted {
    /// The row became a new pivot row at this column.
    Pivot(usize),
    /// The row reduced to zero; `consistent` is false when its right-hand
    /// side did not.
    Dependent { consistent: bool },
}

/// Incremental sparse Gaussian elimination over the rationals.
///
/// Rows are reduced against existing pivots on insertion, so the rank is
/// available at any time and a consistent system can be solved by back
/// substitution.
#[derive(Debug, Default, Clone)]
pub struct SparseEliminator {
    pivots: BTreeMap<usize, (SparseRow, BigRational)>,
    inconsistent: bool,
}

impl SparseEliminator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn insert(&mut self, mut row: SparseRow, mut rhs: BigRational) -> Inserted {
        row.retain(|(_, v)| !v.is_zero());
        while let Some((col, lead)) = row.first().cloned() {
            match self.pivots.get(&col) {
                Some((prow, prhs)) => {
                    row = axpy(&row, &lead, prow);
                    rhs -= &lead * prhs;
                }
                None => {
                    let inv = lead.recip();
                    for (_, v) in row.iter_mut() {
                        *v *= &inv;
                    }
                    rhs *= &inv;
                    self.pivots.insert(col, (row, rhs));
                    return Inserted::Pivot(col);
                }
            }
        }
        let consistent = rhs.is_zero();
        if !consistent {
            self.inconsistent = true;
        }
        Inserted::Dependent { consistent }
    }

    /// Back substitution with free variables set to zero. `None` if any
    /// inserted equation was inconsistent.
    pub fn solution(&self, cols: usize) -> Option<Vec<BigRational>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![BigRational::zero(); cols];
        for (&p, (row, rhs)) in self.pivots.iter().rev() {
            let mut acc = rhs.clone();
            for (j, v) in row.iter().skip(1) {
                if !x[*j].is_zero() {
                    acc -= v * &x[*j];
                }
            }
            x[p] = acc;
        }
        Some(x)
    }
}

/// `row - factor * other`, both sorted sparse rows.
fn axpy(row: &SparseRow, factor: &BigRational, other: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j == other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i == row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, -(factor * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - factor * &other[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank of a sparse rational matrix given as rows.
pub fn sparse_rank<I: IntoIterator<Item = SparseRow>>(rows: I) -> usize {
    let mut e = SparseEliminator::new();
    for r in rows {
        e.insert(r, BigRational::zero());
    }
    e.rank()
}

/// Greatest common divisor of a list of integers (nonnegative; 0 for an
/// all-zero list).
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    xs.into_iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x))
        .abs()
}
